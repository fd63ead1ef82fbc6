#include "fsi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fsi/torus_spectral.hpp"

namespace fsi {

SpatialRegularityReport spatial_regularity_monitor(const Trajectory& traj, double delta,
                                                   double s) {
    if (!(delta > 0.0 && delta < s))
        throw std::invalid_argument(
            "spatial_regularity_monitor: need 0 < delta < s");
    if (traj.eta.empty())
        throw std::invalid_argument("spatial_regularity_monitor: empty trajectory");

    SpatialRegularityReport rep;
    rep.delta = delta;
    rep.s = s;
    const double dt = traj.params.dt();
    const double high_order = 3.0 - (s - delta);

    double sup = 0.0;
    double quad = 0.0;  // trapezoid accumulation of the squared higher norm
    std::vector<double> high;
    high.reserve(traj.eta.size());
    for (size_t n = 0; n < traj.eta.size(); ++n) {
        const double a = sobolev_norm(traj.eta[n], 2.0 + delta);
        const double b = sobolev_norm(traj.eta[n], high_order);
        rep.h2delta.push_back(a);
        high.push_back(b);
        if (n == 0 || a > sup) {
            if (a > sup) rep.sup_step = static_cast<int>(n);
            sup = std::max(sup, a);
        }
        rep.running_sup.push_back(sup);
        if (!std::isfinite(a) || !std::isfinite(b)) rep.finite = false;
    }
    for (size_t n = 0; n + 1 < high.size(); ++n)
        quad += 0.5 * dt * (high[n] * high[n] + high[n + 1] * high[n + 1]);
    rep.sup_value = sup;
    rep.l2_high = std::sqrt(quad);
    if (!std::isfinite(rep.l2_high)) rep.finite = false;
    return rep;
}

namespace {

template <class Field, class SqDiff>
double nikolskii_impl(const std::vector<Field>& series, double dt, double h,
                      SqDiff sq_diff) {
    if (series.empty())
        throw std::invalid_argument("nikolskii_quotient: empty series");
    if (dt <= 0.0) throw std::invalid_argument("nikolskii_quotient: dt must be positive");
    if (h <= 0.0) throw std::invalid_argument("nikolskii_quotient: lag must be positive");
    const double ratio = h / dt;
    const long lag = std::lround(ratio);
    if (lag < 1 || std::abs(ratio - static_cast<double>(lag)) > 1e-9)
        throw std::invalid_argument(
            "nikolskii_quotient: lag must be an integer multiple of dt");
    const long last = static_cast<long>(series.size()) - 1;
    if (lag >= last)
        throw std::invalid_argument("nikolskii_quotient: lag must be below t_max");

    double acc = 0.0;
    for (long n = lag; n <= last; ++n) acc += sq_diff(series[n - lag], series[n]);
    return std::sqrt(acc * dt) / std::pow(h, 0.125);
}

double sq_diff_torus(const TorusField& a, const TorusField& b) {
    if (a.grid != b.grid || a.ncomp != b.ncomp)
        throw std::invalid_argument("nikolskii_quotient: inconsistent series shapes");
    double s2 = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        s2 += d * d;
    }
    return s2 * a.grid.cell_area();
}

double sq_diff_channel(const ChannelField& a, const ChannelField& b) {
    if (a.grid != b.grid || a.ncomp != b.ncomp)
        throw std::invalid_argument("nikolskii_quotient: inconsistent series shapes");
    ChannelField d = a;
    for (size_t i = 0; i < d.data.size(); ++i) d.data[i] -= b.data[i];
    return volume_inner(d, d);
}

}  // namespace

double nikolskii_quotient(const std::vector<TorusField>& series, double dt, double h) {
    return nikolskii_impl(series, dt, h, sq_diff_torus);
}

double nikolskii_quotient(const std::vector<ChannelField>& series, double dt, double h) {
    return nikolskii_impl(series, dt, h, sq_diff_channel);
}

DissipationBudget dissipation_budget(const std::vector<StepRecord>& ledger, double tol) {
    DissipationBudget b;
    if (ledger.empty()) {
        b.certified = true;  // vacuous: nothing spent, nothing held
        return b;
    }
    b.e0 = ledger.front().e_n;
    b.e_final = ledger.back().e_next;
    for (const StepRecord& rec : ledger) {
        b.d_sum += rec.d_n;
        b.c_sum += rec.c_n;
    }
    b.certified = b.d_sum + b.c_sum <= b.e0 + tol * std::max(1.0, b.e0);
    return b;
}

RegularityReport diagnose_trajectory(const Trajectory& traj, double delta) {
    RegularityReport rep;
    rep.spatial = spatial_regularity_monitor(traj, delta, traj.params.s);
    rep.budget = dissipation_budget(traj.ledger);

    const double dt = traj.params.dt();
    const double t_max = traj.steps() * dt;
    for (double h = dt; h <= t_max / 8.0 * (1.0 + 1e-12) && h < t_max; h *= 2.0) {
        rep.lags.push_back(h);
        rep.nikolskii_v.push_back(nikolskii_quotient(traj.v, dt, h));
        rep.nikolskii_u.push_back(nikolskii_quotient(traj.u, dt, h));
    }
    return rep;
}

}  // namespace fsi
