#include "fsi/sim_config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "fsi/rng.hpp"
#include "fsi/torus_spectral.hpp"

namespace fsi {

bool SimConfig::operator==(const SimConfig& o) const {
    const DriverParams &a = driver, &b = o.driver;
    return a.nx == b.nx && a.ny == b.ny && a.nz == b.nz &&
           a.num_steps == b.num_steps && a.t_final == b.t_final && a.nu == b.nu &&
           a.gamma == b.gamma && a.s == b.s && a.alpha == b.alpha &&
           a.delta == b.delta && a.rel_tol == b.rel_tol && a.max_iter == b.max_iter &&
           a.project_initial == b.project_initial && preset == o.preset &&
           mode_kx == o.mode_kx && mode_ky == o.mode_ky && component == o.component &&
           amplitude == o.amplitude && seed == o.seed && kmax == o.kmax &&
           v_z == o.v_z && output_dir == o.output_dir &&
           snapshot_stride == o.snapshot_stride;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct Parser {
    SimConfig cfg;
    std::vector<ConfigViolation> bad;
    std::map<std::string, int> seen;  // key -> first line

    void fail(int line, const std::string& msg) { bad.push_back({line, msg}); }

    bool as_double(int line, const std::string& key, const std::string& v, double* out) {
        const char* c = v.c_str();
        char* end = nullptr;
        const double x = std::strtod(c, &end);
        if (end == c || *end != '\0') {
            fail(line, key + ": cannot parse '" + v + "' as a number");
            return false;
        }
        *out = x;
        return true;
    }

    bool as_int(int line, const std::string& key, const std::string& v, long long* out) {
        const char* c = v.c_str();
        char* end = nullptr;
        const long long x = std::strtoll(c, &end, 10);
        if (end == c || *end != '\0') {
            fail(line, key + ": cannot parse '" + v + "' as an integer");
            return false;
        }
        *out = x;
        return true;
    }

    bool as_bool(int line, const std::string& key, const std::string& v, bool* out) {
        if (v == "true" || v == "1") {
            *out = true;
            return true;
        }
        if (v == "false" || v == "0") {
            *out = false;
            return true;
        }
        fail(line, key + ": expected true or false, got '" + v + "'");
        return false;
    }

    void apply(int line, const std::string& key, const std::string& value) {
        DriverParams& d = cfg.driver;
        long long i = 0;
        double x = 0.0;
        if (key == "nx" || key == "ny") {
            if (as_int(line, key, value, &i)) {
                if (i < 4)
                    fail(line, key + " must be at least 4");
                else
                    (key == "nx" ? d.nx : d.ny) = static_cast<int>(i);
            }
        } else if (key == "nz") {
            if (as_int(line, key, value, &i)) {
                if (i < 5)
                    fail(line, "nz must be at least 5");
                else
                    d.nz = static_cast<int>(i);
            }
        } else if (key == "steps") {
            if (as_int(line, key, value, &i)) {
                if (i < 1)
                    fail(line, "steps must be at least 1");
                else
                    d.num_steps = static_cast<int>(i);
            }
        } else if (key == "t_final") {
            if (as_double(line, key, value, &x)) {
                if (!(x > 0.0))
                    fail(line, "t_final must be positive");
                else
                    d.t_final = x;
            }
        } else if (key == "nu") {
            if (as_double(line, key, value, &x)) {
                if (!(x > 0.0))
                    fail(line, "nu must be positive");
                else
                    d.nu = x;
            }
        } else if (key == "gamma") {
            if (as_double(line, key, value, &x)) {
                if (!(x >= 0.0))
                    fail(line, "gamma must be nonnegative");
                else
                    d.gamma = x;
            }
        } else if (key == "s") {
            if (as_double(line, key, value, &x)) {
                if (!(x > 0.0 && x <= 1.0))
                    fail(line, "s must lie in (0, 1]");
                else
                    d.s = x;
            }
        } else if (key == "delta") {
            if (as_double(line, key, value, &x)) {
                if (!(x > 0.0 && x < 1.0))
                    fail(line, "delta must lie in (0, 1)");
                else
                    d.delta = x;
            }
        } else if (key == "alpha") {
            if (value == "auto") {
                d.alpha = 0.0;
            } else if (as_double(line, key, value, &x)) {
                if (!(x > 0.0 && x < 1.0))
                    fail(line, "alpha must be 'auto' or lie in (0, 1)");
                else
                    d.alpha = x;
            }
        } else if (key == "rel_tol") {
            if (as_double(line, key, value, &x)) {
                if (!(x > 0.0 && x <= 1e-4))
                    fail(line, "rel_tol must lie in (0, 1e-4]");
                else
                    d.rel_tol = x;
            }
        } else if (key == "max_iter") {
            if (as_int(line, key, value, &i)) {
                if (i < 1)
                    fail(line, "max_iter must be at least 1");
                else
                    d.max_iter = static_cast<int>(i);
            }
        } else if (key == "project_initial") {
            as_bool(line, key, value, &d.project_initial);
        } else if (key == "preset") {
            if (value != "zero" && value != "single_mode" &&
                value != "random_bandlimited" && value != "contact_drive")
                fail(line,
                     "preset must be one of zero, single_mode, random_bandlimited, "
                     "contact_drive");
            else
                cfg.preset = value;
        } else if (key == "mode_kx") {
            if (as_int(line, key, value, &i)) cfg.mode_kx = static_cast<int>(i);
        } else if (key == "mode_ky") {
            if (as_int(line, key, value, &i)) cfg.mode_ky = static_cast<int>(i);
        } else if (key == "component") {
            if (as_int(line, key, value, &i)) {
                if (i < 0 || i > 2)
                    fail(line, "component must be 0, 1 or 2");
                else
                    cfg.component = static_cast<int>(i);
            }
        } else if (key == "amplitude") {
            if (as_double(line, key, value, &x)) cfg.amplitude = x;
        } else if (key == "seed") {
            const char* c = value.c_str();
            char* end = nullptr;
            const unsigned long long u = std::strtoull(c, &end, 10);
            if (end == c || *end != '\0')
                fail(line, "seed: cannot parse '" + value + "' as an integer");
            else
                cfg.seed = u;
        } else if (key == "kmax") {
            if (as_int(line, key, value, &i)) {
                if (i < 0)
                    fail(line, "kmax must be nonnegative");
                else
                    cfg.kmax = static_cast<int>(i);
            }
        } else if (key == "v_z") {
            if (as_double(line, key, value, &x)) cfg.v_z = x;
        } else if (key == "output_dir") {
            if (value.empty())
                fail(line, "output_dir must not be empty");
            else
                cfg.output_dir = value;
        } else if (key == "snapshot_stride") {
            if (as_int(line, key, value, &i)) {
                if (i < 0)
                    fail(line, "snapshot_stride must be nonnegative");
                else
                    cfg.snapshot_stride = static_cast<int>(i);
            }
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }
};

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

ConfigParseResult parse_config(const std::string& text) {
    Parser ps;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            ps.fail(line, "expected 'key = value'");
            continue;
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            ps.fail(line, "empty key");
            continue;
        }
        const auto [it, fresh] = ps.seen.emplace(key, line);
        if (!fresh) {
            ps.fail(line, "duplicate key '" + key + "' (lines " +
                              std::to_string(it->second) + " and " +
                              std::to_string(line) + ")");
            continue;
        }
        ps.apply(line, key, value);
    }

    // Cross-field constraints, only meaningful once the fields themselves
    // parsed cleanly.
    if (ps.bad.empty()) {
        const DriverParams& d = ps.cfg.driver;
        if (!(d.delta < d.s)) ps.fail(0, "delta must be smaller than s");
        if (ps.cfg.preset == "single_mode") {
            if (std::abs(ps.cfg.mode_kx) >= d.nx / 2 ||
                std::abs(ps.cfg.mode_ky) >= d.ny / 2)
                ps.fail(0, "single_mode wavevector must stay below the grid Nyquist");
        }
    }

    ConfigParseResult out;
    out.config = ps.cfg;
    out.violations = std::move(ps.bad);
    return out;
}

std::string serialize_config(const SimConfig& c) {
    const DriverParams& d = c.driver;
    std::ostringstream o;
    o << "nx = " << d.nx << "\n";
    o << "ny = " << d.ny << "\n";
    o << "nz = " << d.nz << "\n";
    o << "steps = " << d.num_steps << "\n";
    o << "t_final = " << fmt_double(d.t_final) << "\n";
    o << "nu = " << fmt_double(d.nu) << "\n";
    o << "gamma = " << fmt_double(d.gamma) << "\n";
    o << "s = " << fmt_double(d.s) << "\n";
    o << "delta = " << fmt_double(d.delta) << "\n";
    if (d.alpha > 0.0)
        o << "alpha = " << fmt_double(d.alpha) << "\n";
    else
        o << "alpha = auto\n";
    o << "rel_tol = " << fmt_double(d.rel_tol) << "\n";
    o << "max_iter = " << d.max_iter << "\n";
    o << "project_initial = " << (d.project_initial ? "true" : "false") << "\n";
    o << "preset = " << c.preset << "\n";
    o << "mode_kx = " << c.mode_kx << "\n";
    o << "mode_ky = " << c.mode_ky << "\n";
    o << "component = " << c.component << "\n";
    o << "amplitude = " << fmt_double(c.amplitude) << "\n";
    o << "seed = " << c.seed << "\n";
    o << "kmax = " << c.kmax << "\n";
    o << "v_z = " << fmt_double(c.v_z) << "\n";
    o << "output_dir = " << c.output_dir << "\n";
    o << "snapshot_stride = " << c.snapshot_stride << "\n";
    return o.str();
}

namespace {

// Seeded band-limited field: every mode with max(|kx|, |ky|) <= kmax gets a
// counter-based coefficient, so the draw is reproducible across platforms.
TorusField band_limited(const Grid2d& g, int ncomp, std::uint64_t seed, int kmax,
                        double amp) {
    SpectralCoeffs c(g, ncomp);
    std::uint64_t idx = 0;
    for (int comp = 0; comp < ncomp; ++comp)
        for (int iky = 0; iky < g.ny; ++iky)
            for (int ikx = 0; ikx < g.nkx(); ++ikx) {
                const int ky = std::abs(g.ky_signed(iky));
                const double re = rng_sym(seed, idx++);
                const double im = rng_sym(seed, idx++);
                if (ikx <= kmax && ky <= kmax)
                    c.at(comp, iky, ikx) = amp * std::complex<double>(re, im);
            }
    enforce_conjugate_symmetry(c);
    return to_physical(c);
}

}  // namespace

InitialData build_initial_data(const SimConfig& c) {
    InitialData d = zero_initial_data(c.driver);
    const Grid2d g2(c.driver.nx, c.driver.ny);
    if (c.preset == "zero") {
        return d;
    }
    if (c.preset == "single_mode") {
        for (int iy = 0; iy < g2.ny; ++iy)
            for (int ix = 0; ix < g2.nx; ++ix)
                d.eta0.at(c.component, iy, ix) =
                    c.amplitude * std::cos(c.mode_kx * g2.x(ix) + c.mode_ky * g2.y(iy));
        return d;
    }
    if (c.preset == "random_bandlimited") {
        d.eta0 = band_limited(g2, 3, c.seed, c.kmax, c.amplitude);
        d.v0 = band_limited(g2, 3, c.seed + 1, c.kmax, c.amplitude);
        return d;
    }
    if (c.preset == "contact_drive") {
        // Downward plunger profile; a nonzero-mean profile would violate the
        // enclosed-volume constraint, so the drive is a pure cosine.
        for (int iy = 0; iy < g2.ny; ++iy)
            for (int ix = 0; ix < g2.nx; ++ix)
                d.v0.at(2, iy, ix) = c.v_z * std::cos(g2.x(ix));
        return d;
    }
    throw std::invalid_argument("build_initial_data: unknown preset " + c.preset);
}

}  // namespace fsi
