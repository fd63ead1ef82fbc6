#include "fsi/torus_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace fsi {

namespace {

bool self_paired_column(const Grid2d& g, int ikx) {
    return ikx == 0 || (g.nx % 2 == 0 && ikx == g.nx / 2);
}

bool nyquist_x(const Grid2d& g, int ikx) {
    return g.nx % 2 == 0 && ikx == g.nx / 2;
}

bool nyquist_y(const Grid2d& g, int iky) {
    return g.ny % 2 == 0 && iky == g.ny / 2;
}

void check_same(const TorusField& a, const TorusField& b) {
    if (a.grid != b.grid || a.ncomp != b.ncomp)
        throw std::invalid_argument("torus_spectral: mismatched grid/ncomp");
}

}  // namespace

double mode_ksq(const Grid2d& g, int iky, int ikx) {
    const double kx = ikx;  // half-spectrum column, already >= 0
    const double ky = g.ky_signed(iky);
    return kx * kx + ky * ky;
}

double mode_multiplicity(const Grid2d& g, int iky, int ikx) {
    if (!self_paired_column(g, ikx)) return 2.0;
    (void)iky;
    return 1.0;
}

TorusField apply_fractional_laplacian(const TorusField& f, double r) {
    if (r < 0.0)
        throw std::invalid_argument("apply_fractional_laplacian: r must be >= 0");
    if (r == 0.0) return f;
    SpectralCoeffs c = to_spectral(f);
    const Grid2d& g = f.grid;
    for (int comp = 0; comp < c.ncomp; ++comp)
        for (int iky = 0; iky < g.ny; ++iky)
            for (int ikx = 0; ikx < g.nkx(); ++ikx) {
                const double k2 = mode_ksq(g, iky, ikx);
                c.at(comp, iky, ikx) *= (k2 == 0.0) ? 0.0 : std::pow(k2, 0.5 * r);
            }
    return to_physical(c);
}

namespace {

// Common weighted spectral sum: sum over the lattice of w(|k|^2) |fhat|^2,
// scaled to L2(Gamma).
template <typename WeightFn>
double spectral_sum(const SpectralCoeffs& c, WeightFn&& weight) {
    const Grid2d& g = c.grid;
    double acc = 0.0;
    for (int comp = 0; comp < c.ncomp; ++comp)
        for (int iky = 0; iky < g.ny; ++iky)
            for (int ikx = 0; ikx < g.nkx(); ++ikx) {
                const double k2 = mode_ksq(g, iky, ikx);
                acc += mode_multiplicity(g, iky, ikx) * weight(k2) *
                       std::norm(c.at(comp, iky, ikx));
            }
    return kTwoPi * kTwoPi * acc;
}

}  // namespace

double sobolev_norm(const TorusField& f, double m) {
    if (m < 0.0)
        throw std::invalid_argument("sobolev_norm: m must be >= 0");
    SpectralCoeffs c = to_spectral(f);
    return std::sqrt(spectral_sum(c, [m](double k2) { return std::pow(1.0 + k2, m); }));
}

double lambda_seminorm(const SpectralCoeffs& c, double r) {
    if (r < 0.0)
        throw std::invalid_argument("lambda_seminorm: r must be >= 0");
    return std::sqrt(spectral_sum(c, [r](double k2) {
        return (k2 == 0.0) ? (r == 0.0 ? 1.0 : 0.0) : std::pow(k2, r);
    }));
}

double lambda_seminorm(const TorusField& f, double r) {
    return lambda_seminorm(to_spectral(f), r);
}

double l2_inner(const TorusField& f, const TorusField& g) {
    check_same(f, g);
    double acc = 0.0;
    const size_t n = f.data.size();
    for (size_t i = 0; i < n; ++i) acc += f.data[i] * g.data[i];
    return f.grid.cell_area() * acc;
}

double l2_norm(const TorusField& f) { return std::sqrt(l2_inner(f, f)); }

namespace {

TorusField deriv_dir(const TorusField& f, bool along_x) {
    SpectralCoeffs c = to_spectral(f);
    const Grid2d& g = f.grid;
    for (int comp = 0; comp < c.ncomp; ++comp)
        for (int iky = 0; iky < g.ny; ++iky)
            for (int ikx = 0; ikx < g.nkx(); ++ikx) {
                double k;
                if (along_x)
                    k = nyquist_x(g, ikx) ? 0.0 : ikx;
                else
                    k = nyquist_y(g, iky) ? 0.0 : g.ky_signed(iky);
                c.at(comp, iky, ikx) *= std::complex<double>(0.0, k);
            }
    return to_physical(c);
}

}  // namespace

TorusField deriv_x(const TorusField& f) { return deriv_dir(f, true); }
TorusField deriv_y(const TorusField& f) { return deriv_dir(f, false); }

// ---------------------------------------------------------------------------
// Low-mode projection.
//
// The real eigenbasis of -Laplace on the torus is enumerated as one cosine
// mode per self-conjugate lattice point and a cosine/sine pair otherwise.
// Each entry points at the stored half-spectrum slot holding its amplitude
// (cosine <-> real part, sine <-> imaginary part).
// ---------------------------------------------------------------------------

namespace {

struct RealMode {
    double ksq;
    int kx_rep;   // representative kx >= 0
    int ky_rep;   // signed representative
    int phase;    // 0 = cos, 1 = sin
    int iky, ikx; // storage slot
};

std::vector<RealMode> enumerate_real_modes(const Grid2d& g) {
    std::vector<RealMode> modes;
    modes.reserve(static_cast<size_t>(g.nx) * g.ny);
    for (int ikx = 0; ikx < g.nkx(); ++ikx) {
        if (self_paired_column(g, ikx)) {
            // Canonical rows 0..ny/2; the rest of the column is redundant.
            for (int iky = 0; iky <= g.ny / 2; ++iky) {
                const double k2 = mode_ksq(g, iky, ikx);
                const bool self_conj = (iky == 0 || nyquist_y(g, iky));
                modes.push_back({k2, ikx, iky, 0, iky, ikx});
                if (!self_conj) modes.push_back({k2, ikx, iky, 1, iky, ikx});
            }
        } else {
            for (int iky = 0; iky < g.ny; ++iky) {
                const double k2 = mode_ksq(g, iky, ikx);
                const int ky = g.ky_signed(iky);
                modes.push_back({k2, ikx, ky, 0, iky, ikx});
                modes.push_back({k2, ikx, ky, 1, iky, ikx});
            }
        }
    }
    std::sort(modes.begin(), modes.end(), [](const RealMode& a, const RealMode& b) {
        return std::tie(a.ksq, a.kx_rep, a.ky_rep, a.phase) <
               std::tie(b.ksq, b.kx_rep, b.ky_rep, b.phase);
    });
    return modes;
}

}  // namespace

TorusField project_low_modes(const TorusField& f, int num_modes) {
    const Grid2d& g = f.grid;
    const int total = g.nx * g.ny;
    if (num_modes < 1 || num_modes > total)
        throw std::invalid_argument("project_low_modes: num_modes out of range");
    if (num_modes == total) return f;

    const SpectralCoeffs in = to_spectral(f);
    SpectralCoeffs out(g, f.ncomp);
    const auto modes = enumerate_real_modes(g);
    for (int m = 0; m < num_modes; ++m) {
        const RealMode& rm = modes[m];
        for (int comp = 0; comp < f.ncomp; ++comp) {
            const auto v = in.at(comp, rm.iky, rm.ikx);
            auto& o = out.at(comp, rm.iky, rm.ikx);
            if (rm.phase == 0)
                o += std::complex<double>(v.real(), 0.0);
            else
                o += std::complex<double>(0.0, v.imag());
        }
    }
    // Rebuild the redundant mirror rows of the self-paired columns.
    for (int ikx = 0; ikx < g.nkx(); ++ikx) {
        if (!(ikx == 0 || (g.nx % 2 == 0 && ikx == g.nx / 2))) continue;
        for (int iky = 1; iky < (g.ny + 1) / 2; ++iky)
            for (int comp = 0; comp < f.ncomp; ++comp)
                out.at(comp, g.ny - iky, ikx) = std::conj(out.at(comp, iky, ikx));
    }
    return to_physical(out);
}

double projection_lambda(const Grid2d& g, int num_modes) {
    const int total = g.nx * g.ny;
    if (num_modes < 1 || num_modes > total)
        throw std::invalid_argument("projection_lambda: num_modes out of range");
    return enumerate_real_modes(g)[num_modes - 1].ksq;
}

}  // namespace fsi
