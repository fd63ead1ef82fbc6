#pragma once

#include <vector>

#include "fsi/splitting_driver.hpp"

namespace fsi {

/// Spatial regularity monitor of a stored trajectory: the step series of
/// ||eta^n||_{H^{2+delta}} with its running supremum, and the trapezoidal
/// time quadrature of the higher norm ||eta||_{H^{3-(s-delta)}} in L^2.
/// Requires 0 < delta < s.
struct SpatialRegularityReport {
    double delta = 0.0;
    double s = 0.0;
    std::vector<double> h2delta;      // per stored step, size steps()+1
    std::vector<double> running_sup;  // prefix maxima, nondecreasing
    int sup_step = 0;                 // first step attaining the supremum
    double sup_value = 0.0;
    double l2_high = 0.0;  // ( int_0^{t_max} ||eta||_{H^{3-(s-delta)}}^2 )^{1/2}
    bool finite = true;
};

SpatialRegularityReport spatial_regularity_monitor(const Trajectory& traj, double delta,
                                                   double s);

/// Temporal regularity quotient of a time series sampled at spacing dt:
///   ( sum_{n dt >= h} ||f((n-L) dt) - f(n dt)||^2 dt )^{1/2} / h^{1/8},
/// the translation-difference functional whose uniform boundedness over lags
/// witnesses Nikolskii 1/8-regularity. The lag h must be a positive integer
/// multiple L of dt with h < t_max; fractional lags are rejected rather than
/// hidden behind interpolation. The time sum includes both endpoints, so the
/// affine series t*g evaluates to h^{7/8} ||g|| (t_max - h + dt)^{1/2}.
double nikolskii_quotient(const std::vector<TorusField>& series, double dt, double h);
double nikolskii_quotient(const std::vector<ChannelField>& series, double dt, double h);

/// Ledger-level dissipation accounting: the physical (D) and numerical (C)
/// totals must stay below the initial energy.
struct DissipationBudget {
    double e0 = 0.0;       // E^0: head energy of the first ledger row
    double d_sum = 0.0;    // sum of D^n
    double c_sum = 0.0;    // sum of C^n
    double e_final = 0.0;  // tail energy of the last row
    bool certified = false;  // d_sum + c_sum <= e0 within tolerance
};

DissipationBudget dissipation_budget(const std::vector<StepRecord>& ledger,
                                     double tol = 1e-8);

/// Full diagnostic pass over a trajectory: spatial monitor (with s taken
/// from the run parameters), Nikolskii quotients of the interface- and
/// fluid-velocity series over the dyadic lags h = dt, 2 dt, ... up to
/// t_max/8, and the dissipation budget.
struct RegularityReport {
    SpatialRegularityReport spatial;
    std::vector<double> lags;
    std::vector<double> nikolskii_v;
    std::vector<double> nikolskii_u;
    DissipationBudget budget;
};

RegularityReport diagnose_trajectory(const Trajectory& traj, double delta);

}  // namespace fsi
