#include <doctest.h>

#include <cmath>
#include <complex>

#include "fsi/structure_step.hpp"
#include "fsi/torus_spectral.hpp"
#include "test_util.hpp"

using namespace fsi;
using fsi::test::make_field;
using fsi::test::make_random_field;
using fsi::test::max_abs;
using fsi::test::max_abs_diff;

namespace {

const Grid2d g16(16, 16);

StructureParams params(double dt, int n, double s = 0.5) {
    StructureParams p;
    p.gamma = 1.0;
    p.s = s;
    p.dt = dt;
    p.num_steps = n;
    return p;
}

}  // namespace

TEST_CASE("frozen single-mode update") {
    // k = (1,0), dt = 0.1, N = 10: mu = 1 + 1/10 = 1.1, and the cosine
    // amplitude follows the scalar recurrence
    //   a_v' = (a_v - dt mu a_e)/(1 + dt^2 mu),  a_e' = a_e + dt a_v'.
    auto eta = make_field(g16, 3, [](double x, double, int c) {
        return c == 2 ? std::cos(x) : 0.0;
    });
    TorusField v(g16, 3);
    auto p = params(0.1, 10);
    auto out = advance_structure(eta, v, p);
    const double av = -0.11 / 1.011;
    const double ae = 1.0 + 0.1 * av;
    for (int ix = 0; ix < 16; ++ix) {
        CHECK(out.v.at(2, 0, ix) == doctest::Approx(av * std::cos(g16.x(ix))).epsilon(1e-12));
        CHECK(out.eta.at(2, 0, ix) ==
              doctest::Approx(ae * std::cos(g16.x(ix))).epsilon(1e-12));
    }
    // Untouched components stay zero.
    for (int c = 0; c < 2; ++c)
        for (int ix = 0; ix < 16; ++ix) CHECK(out.eta.at(c, 0, ix) == 0.0);
}

TEST_CASE("dense 2x2 oracle over random band-limited data") {
    // Independent oracle: per mode solve [1, dt mu; -dt, 1] [v'; e'] = [v; e]
    // by Cramer's rule on the spectral coefficients.
    auto eta = make_random_field(g16, 3, 61, 5, 0.7);
    auto v = make_random_field(g16, 3, 62, 5, 0.4);
    auto p = params(0.05, 40);
    auto out = advance_structure(eta, v, p);
    auto ehat = to_spectral(eta), vhat = to_spectral(v);
    auto oehat = to_spectral(out.eta), ovhat = to_spectral(out.v);
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int iky = 0; iky < g16.ny; ++iky)
            for (int ikx = 0; ikx < g16.nkx(); ++ikx) {
                const double k2 = mode_ksq(g16, iky, ikx);
                const double mu = k2 * k2 + k2 * k2 * k2 / p.num_steps;
                const std::complex<double> ve = vhat.at(c, iky, ikx);
                const std::complex<double> ee = ehat.at(c, iky, ikx);
                const double det = 1.0 + p.dt * p.dt * mu;
                const std::complex<double> vp = (ve - p.dt * mu * ee) / det;
                const std::complex<double> ep = (ee + p.dt * ve) / det;
                worst = std::max(worst, std::abs(ovhat.at(c, iky, ikx) - vp));
                worst = std::max(worst, std::abs(oehat.at(c, iky, ikx) - ep));
            }
    CHECK(worst < 1e-13);
}

TEST_CASE("zero data, zero-mode drift, decoupling, contraction") {
    auto p = params(0.02, 50);
    TorusField z3(g16, 3);
    auto out0 = advance_structure(z3, z3, p);
    CHECK(max_abs(out0.eta) == 0.0);
    CHECK(max_abs(out0.v) == 0.0);

    // k = 0 is unconstrained: pure drift eta += dt v.
    auto etac = make_field(g16, 3, [](double, double, int c) { return c == 2 ? 0.3 : 0.0; });
    auto vc = make_field(g16, 3, [](double, double, int c) { return c == 2 ? -2.0 : 0.0; });
    auto drift = advance_structure(etac, vc, p);
    CHECK(drift.eta.at(2, 5, 5) == doctest::Approx(0.3 - 2.0 * p.dt).epsilon(1e-13));
    CHECK(drift.v.at(2, 5, 5) == doctest::Approx(-2.0).epsilon(1e-13));

    // A single excited mode leaves every other mode at zero.
    auto single = make_field(g16, 3, [](double x, double y, int c) {
        return c == 1 ? std::sin(2 * x + y) : 0.0;
    });
    auto outs = advance_structure(single, z3, p);
    auto shat = to_spectral(outs.eta);
    for (int iky = 0; iky < g16.ny; ++iky)
        for (int ikx = 0; ikx < g16.nkx(); ++ikx) {
            const bool active = (ikx == 2 && g16.ky_signed(iky) == 1);
            if (!active)
                for (int c = 0; c < 3; ++c)
                    CHECK(std::abs(shat.at(c, iky, ikx)) < 1e-14);
        }

    // With v = 0 every nonzero mode contracts strictly.
    auto eta = make_random_field(g16, 3, 70, 4, 1.0);
    auto oute = advance_structure(eta, z3, p);
    auto before = to_spectral(eta), after = to_spectral(oute.eta);
    for (int c = 0; c < 3; ++c)
        for (int iky = 0; iky < g16.ny; ++iky)
            for (int ikx = 0; ikx < g16.nkx(); ++ikx) {
                const double k2 = mode_ksq(g16, iky, ikx);
                const double b = std::abs(before.at(c, iky, ikx));
                if (k2 == 0.0 || b < 1e-14) continue;
                CHECK(std::abs(after.at(c, iky, ikx)) < b);
            }
}

TEST_CASE("per-mode energy identity with the step's own weights") {
    // 1/2|v'|^2 + 1/2 mu |e'|^2 + 1/2|v'-v|^2 + 1/2 mu |e'-e|^2
    //   = 1/2|v|^2 + 1/2 mu |e|^2 exactly, per mode.
    auto eta = make_random_field(g16, 3, 71, 6, 0.9);
    auto v = make_random_field(g16, 3, 72, 6, 0.8);
    auto p = params(0.07, 30);
    auto out = advance_structure(eta, v, p);
    auto e0 = to_spectral(eta), v0 = to_spectral(v);
    auto e1 = to_spectral(out.eta), v1 = to_spectral(out.v);
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int iky = 0; iky < g16.ny; ++iky)
            for (int ikx = 0; ikx < g16.nkx(); ++ikx) {
                const double k2 = mode_ksq(g16, iky, ikx);
                const double mu = k2 * k2 + k2 * k2 * k2 / p.num_steps;
                const auto ea = e0.at(c, iky, ikx), eb = e1.at(c, iky, ikx);
                const auto va = v0.at(c, iky, ikx), vb = v1.at(c, iky, ikx);
                const double lhs = 0.5 * std::norm(vb) + 0.5 * mu * std::norm(eb) +
                                   0.5 * std::norm(vb - va) + 0.5 * mu * std::norm(eb - ea);
                const double rhs = 0.5 * std::norm(va) + 0.5 * mu * std::norm(ea);
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, rhs));
            }
    CHECK(worst < 1e-13);
}

TEST_CASE("energy component values on a cosine mode") {
    auto eta = make_field(g16, 3, [](double x, double, int c) {
        return c == 2 ? std::cos(x) : 0.0;
    });
    auto v = make_field(g16, 3, [](double x, double, int c) {
        return c == 2 ? 0.5 * std::cos(x) : 0.0;
    });
    auto p = params(0.1, 20);
    auto e = structure_energy(eta, v, p);
    const double l2sq = 0.5 * kTwoPi * kTwoPi;  // ||cos x||^2 on the torus
    CHECK(e.kinetic == doctest::Approx(0.5 * 0.25 * l2sq).epsilon(1e-12));
    CHECK(e.bending == doctest::Approx(0.5 * l2sq).epsilon(1e-12));  // |k|^4 = 1
    CHECK(e.regularization == doctest::Approx(0.5 * l2sq / 20.0).epsilon(1e-12));
    CHECK(e.total() == doctest::Approx(e.kinetic + e.bending + e.regularization));
}

TEST_CASE("substep inequality certifies as an identity") {
    auto p = params(0.05, 40);
    // Zero data: equality.
    StructureState z{TorusField(g16, 3), TorusField(g16, 3)};
    auto rz = check_structure_energy_inequality(z, advance_structure(z.eta, z.v, p), p);
    CHECK(rz.pass);
    CHECK(std::abs(rz.slack) < 1e-14);

    // Random states: the slack is roundoff-sized, never meaningfully negative.
    for (uint64_t seed = 0; seed < 100; ++seed) {
        auto eta = make_random_field(g16, 3, 1000 + seed, 5, 0.8);
        auto v = make_random_field(g16, 3, 2000 + seed, 5, 0.6);
        auto out = advance_structure(eta, v, p);
        auto r = check_structure_energy_inequality({eta, v}, out, p);
        CHECK(r.pass);
        CHECK(std::abs(r.slack) <= 1e-10 * std::max(1.0, r.rhs));
    }
}

TEST_CASE("parameter validation") {
    TorusField f(g16, 3);
    CHECK_THROWS_AS(advance_structure(f, f, params(0.1, 10, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(advance_structure(f, f, params(0.1, 10, 1.5)), std::invalid_argument);
    CHECK_THROWS_AS(advance_structure(f, f, params(-0.1, 10)), std::invalid_argument);
    CHECK_THROWS_AS(advance_structure(f, f, params(0.1, 0)), std::invalid_argument);
    // s = 1 is admissible.
    CHECK_NOTHROW(advance_structure(f, f, params(0.1, 10, 1.0)));
    TorusField other(Grid2d(8, 8), 3);
    CHECK_THROWS_AS(advance_structure(f, other, params(0.1, 10)), std::invalid_argument);
}
