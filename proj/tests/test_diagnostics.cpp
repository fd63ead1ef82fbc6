#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsi/diagnostics.hpp"
#include "fsi/torus_spectral.hpp"
#include "test_util.hpp"

using namespace fsi;

namespace {

DriverParams small_params() {
    DriverParams p;
    p.nx = 16;
    p.ny = 16;
    p.nz = 9;
    p.num_steps = 16;
    p.t_final = 0.16;
    p.rel_tol = 1e-10;
    return p;
}

InitialData single_mode_data(const DriverParams& p, double amp) {
    InitialData d = zero_initial_data(p);
    const Grid2d g2(p.nx, p.ny);
    for (int iy = 0; iy < p.ny; ++iy)
        for (int ix = 0; ix < p.nx; ++ix)
            d.eta0.at(2, iy, ix) = amp * std::cos(g2.x(ix));
    return d;
}

}  // namespace

TEST_CASE("spatial monitor: closed-form values on a single mode") {
    DriverParams p = small_params();
    p.num_steps = 1;
    p.t_final = 0.01;
    const double amp = 0.05;
    const Grid2d g2(p.nx, p.ny);

    // Hand-built one-entry trajectory around eta = amp cos(x) e_z.
    Trajectory traj;
    traj.grid = Grid3d(p.nx, p.ny, p.nz);
    traj.params = p;
    traj.eta.push_back(single_mode_data(p, amp).eta0);

    const SpatialRegularityReport rep = spatial_regularity_monitor(traj, 0.25, 0.5);
    // ||amp cos x||_{H^m} = 2 pi amp 2^{(m-1)/2} under the norm convention
    // (two lattice modes of squared magnitude (amp/2)^2, weight (1+1)^m).
    const double c0 = kTwoPi * amp;
    CHECK(rep.h2delta[0] ==
          doctest::Approx(c0 * std::pow(2.0, 0.5 * (2.25 - 1.0))).epsilon(1e-12));
    CHECK(rep.sup_value == rep.h2delta[0]);
    CHECK(rep.sup_step == 0);
    CHECK(rep.l2_high == 0.0);  // single entry: no time extent
    CHECK(rep.finite);

    CHECK_THROWS_AS(spatial_regularity_monitor(traj, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(spatial_regularity_monitor(traj, -0.1, 0.5), std::invalid_argument);

    // Two identical entries: the L2-in-time value is ||eta||_{H^{2.75}} sqrt(dt).
    traj.eta.push_back(traj.eta[0]);
    traj.ledger.push_back(StepRecord{});
    const SpatialRegularityReport rep2 = spatial_regularity_monitor(traj, 0.25, 0.5);
    const double high = c0 * std::pow(2.0, 0.5 * (2.75 - 1.0));
    CHECK(rep2.l2_high == doctest::Approx(high * std::sqrt(p.dt())).epsilon(1e-12));
}

TEST_CASE("spatial monitor on runs: frozen structure and decaying mode") {
    DriverParams p = small_params();
    p.num_steps = 4;
    p.t_final = 0.04;

    // Constant (zero-mode) displacement: no elastic force, no fluid motion,
    // so the series is constant and the budget is the vacuous 0 <= 0.
    InitialData frozen = zero_initial_data(p);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < p.nx * p.ny; ++i)
            frozen.eta0.plane(c)[i] = 0.05 * (c + 1);
    const RunResult fr = run_splitting(p, frozen);
    REQUIRE(fr.completed);
    const SpatialRegularityReport frep =
        spatial_regularity_monitor(fr.trajectory, 0.25, 0.5);
    for (double a : frep.h2delta)
        CHECK(a == doctest::Approx(frep.h2delta[0]).epsilon(1e-13));
    CHECK(frep.sup_value == doctest::Approx(frep.h2delta[0]).epsilon(1e-13));
    const DissipationBudget fb = dissipation_budget(fr.trajectory.ledger);
    CHECK(fb.e0 == 0.0);
    CHECK(fb.d_sum == 0.0);
    CHECK(fb.certified);

    // Released single mode: the monitor stays below its initial value and the
    // running sup is nondecreasing with the sup attained at a stored step.
    DriverParams q = small_params();
    const RunResult r = run_splitting(q, single_mode_data(q, 0.05));
    REQUIRE(r.completed);
    const SpatialRegularityReport rep =
        spatial_regularity_monitor(r.trajectory, 0.25, 0.5);
    CHECK(rep.finite);
    CHECK(rep.sup_value <= rep.h2delta[0] * (1.0 + 1e-8));
    for (size_t i = 1; i < rep.running_sup.size(); ++i)
        CHECK(rep.running_sup[i] >= rep.running_sup[i - 1]);
    CHECK(rep.sup_value == rep.h2delta[rep.sup_step]);
    CHECK(rep.running_sup.back() == rep.sup_value);
    CHECK(rep.l2_high > 0.0);
}

TEST_CASE("nikolskii quotient: exact values and invariances") {
    const Grid2d g(8, 8);
    const double dt = 0.01;
    const TorusField gfield = fsi::test::make_random_field(g, 3, 11, 3, 1.0);

    // Zero and constant series vanish exactly.
    std::vector<TorusField> zeros(9, TorusField(g, 3));
    CHECK(nikolskii_quotient(zeros, dt, 2 * dt) == 0.0);
    std::vector<TorusField> consts(9, gfield);
    CHECK(nikolskii_quotient(consts, dt, 3 * dt) == 0.0);

    // Affine series t*g: closed form h^{7/8} ||g|| ((m-L+1) dt)^{1/2}.
    const int m = 16;
    std::vector<TorusField> affine;
    for (int n = 0; n <= m; ++n) {
        TorusField f = gfield;
        for (double& x : f.data) x *= n * dt;
        affine.push_back(f);
    }
    const double gn = l2_norm(gfield);
    for (int lag : {1, 2, 4, 8}) {
        const double h = lag * dt;
        const double expect =
            std::pow(h, 7.0 / 8.0) * gn * std::sqrt((m - lag + 1) * dt);
        CHECK(nikolskii_quotient(affine, dt, h) == doctest::Approx(expect).epsilon(1e-12));
    }

    // Adding a constant-in-time field leaves the quotient invariant.
    const TorusField shift = fsi::test::make_random_field(g, 3, 12, 2, 5.0);
    std::vector<TorusField> shifted = affine;
    for (TorusField& f : shifted)
        for (size_t i = 0; i < f.data.size(); ++i) f.data[i] += shift.data[i];
    const double q0 = nikolskii_quotient(affine, dt, 2 * dt);
    CHECK(nikolskii_quotient(shifted, dt, 2 * dt) == doctest::Approx(q0).epsilon(1e-12));

    // Lag validation: fractional, nonpositive, and out-of-window lags.
    CHECK_THROWS_AS(nikolskii_quotient(affine, dt, 1.5 * dt), std::invalid_argument);
    CHECK_THROWS_AS(nikolskii_quotient(affine, dt, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(nikolskii_quotient(affine, dt, m * dt), std::invalid_argument);
    CHECK_THROWS_AS(nikolskii_quotient(affine, dt, 17 * dt), std::invalid_argument);
}

TEST_CASE("diagnose_trajectory: solver run is regular and budgeted") {
    const DriverParams p = small_params();
    const RunResult r = run_splitting(p, single_mode_data(p, 0.05));
    REQUIRE(r.completed);

    const RegularityReport rep = diagnose_trajectory(r.trajectory, 0.25);
    // Dyadic lags up to t_max/8 = 2 dt for a 16-step run.
    REQUIRE(rep.lags.size() == 2);
    CHECK(rep.lags[0] == doctest::Approx(p.dt()));
    CHECK(rep.lags[1] == doctest::Approx(2 * p.dt()));
    REQUIRE(rep.nikolskii_v.size() == 2);
    REQUIRE(rep.nikolskii_u.size() == 2);
    for (double qv : rep.nikolskii_v) CHECK(std::isfinite(qv));

    // Uniform boundedness across the lag family, separately per series.
    const std::vector<TorusField>& vs = r.trajectory.v;
    const std::vector<ChannelField>& us = r.trajectory.u;
    double vmin = 1e300, vmax = 0.0, umin = 1e300, umax = 0.0;
    for (int lag : {1, 2, 4, 8}) {
        const double qv = nikolskii_quotient(vs, p.dt(), lag * p.dt());
        const double qu = nikolskii_quotient(us, p.dt(), lag * p.dt());
        vmin = std::min(vmin, qv);
        vmax = std::max(vmax, qv);
        umin = std::min(umin, qu);
        umax = std::max(umax, qu);
    }
    CHECK(vmax > 0.0);
    CHECK(vmax / vmin <= 10.0);
    CHECK(umax / umin <= 10.0);

    // Budget: strictly positive, below E^0, matching the ledger sums.
    const DissipationBudget b = rep.budget;
    CHECK(b.certified);
    CHECK(b.d_sum > 0.0);
    CHECK(b.c_sum > 0.0);
    CHECK(b.d_sum + b.c_sum <= b.e0);
    CHECK(b.e_final <= b.e0);
    double dsum = 0.0;
    for (const StepRecord& rec : r.trajectory.ledger) dsum += rec.d_n;
    CHECK(b.d_sum == doctest::Approx(dsum));

    // The spatial part agrees with a direct monitor call.
    const SpatialRegularityReport direct =
        spatial_regularity_monitor(r.trajectory, 0.25, p.s);
    CHECK(rep.spatial.sup_value == direct.sup_value);
    CHECK(rep.spatial.l2_high == direct.l2_high);
}
