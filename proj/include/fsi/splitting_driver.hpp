#pragma once

#include <functional>
#include <vector>

#include "fsi/ale_map.hpp"
#include "fsi/fluid_step.hpp"
#include "fsi/structure_step.hpp"

namespace fsi {

/// Controls for the split time integration. A single resolution parameter
/// `num_steps` fixes both the step count (dt = t_final / num_steps) and the
/// strength 1/num_steps of the sixth-order structure regularization, so
/// refining the time grid simultaneously weakens the regularization.
struct DriverParams {
    int nx = 16, ny = 16, nz = 9;
    int num_steps = 16;
    double t_final = 0.16;
    double nu = 1.0;     // fluid viscosity
    double gamma = 1.0;  // interface damping coefficient
    double s = 0.5;      // fractional damping order in (0, 1]
    double alpha = 0.0;  // contact floor for the Jacobian; <= 0 means auto,
                         // resolved to 0.5 * min J^0 of the initial map
    double delta = 0.25;    // Sobolev offset of the advisory contact norm
    double rel_tol = 1e-10; // fluid solver relative residual target
    int max_iter = 400;
    bool project_initial = true;  // project (u0, v0) onto the constraint space

    double dt() const { return t_final / num_steps; }
    void validate() const;
    StructureParams structure() const;
    FluidParams fluid() const;
};

/// One per-step row of the energy ledger. The field order here is the
/// serialization contract for the CSV writer.
struct StepRecord {
    int step = 0;    // 1-based index of the completed step
    double t = 0.0;  // step * dt
    double e_n = 0.0, e_half = 0.0, e_next = 0.0;  // energies around the step
    double d_n = 0.0;  // physical dissipation: viscous plus interface damping
    double c_n = 0.0;  // numerical dissipation: the five squared jumps
    double min_jacobian = 0.0, eta_h2delta = 0.0;  // contact monitors
    double struct_slack = 0.0, fluid_slack = 0.0;  // inequality margins
    int solver_iters = 0;
    double solver_residual = 0.0;
    bool struct_pass = false, fluid_pass = false;  // verdicts, not serialized
};

struct ContactInfo {
    bool contact = false;
    int failed_step = 0;  // 1-based index of the aborted step
    double min_jacobian = 0.0;
    double eta_h2delta = 0.0;
};

struct FsiState {
    double t = 0.0;
    StructureState structure;
    AleMap map;      // extension of structure.eta
    ChannelField u;  // fluid velocity on the reference channel
    ChannelField p;  // latest pressure reconstruction (diagnostic)
};

/// Complete stored history of a run; the diagnostics and the interpolants
/// below read from it. Index k holds the state after k completed steps.
struct Trajectory {
    Grid3d grid;
    DriverParams params;             // with the resolved alpha
    std::vector<TorusField> eta;     // size steps()+1
    std::vector<TorusField> v;       // size steps()+1
    std::vector<TorusField> v_half;  // structure midpoint velocities, size steps()
    std::vector<ChannelField> u;     // size steps()+1
    std::vector<StepRecord> ledger;  // size steps()

    int steps() const { return static_cast<int>(ledger.size()); }
};

struct RunResult {
    Trajectory trajectory;
    FsiState state;  // state at t_max
    ContactInfo contact;
    double t_max = 0.0;      // completed steps * dt
    bool completed = false;  // reached t_final without contact
    double alpha = 0.0;      // resolved contact floor actually used
};

struct InitialData {
    TorusField eta0, v0;  // interface displacement and velocity
    ChannelField u0;      // fluid velocity
};

/// All-zero admissible data on the grid of `p`.
InitialData zero_initial_data(const DriverParams& p);

/// Called after each completed step with its ledger row and the updated
/// state; lets a caller persist progress as it happens.
using StepObserver = std::function<void(const StepRecord&, const FsiState&)>;

/// Run the Lie splitting: per step one implicit structure substep (which
/// freezes the new geometry), a contact gate on the extended map, then one
/// implicit fluid substep on the frozen geometry with the structure midpoint
/// velocity as interface data. On a gate failure the step is abandoned and
/// the run ends at the last completed state.
RunResult run_splitting(const DriverParams& params, const InitialData& init,
                        const StepObserver& observer = {});

/// Piecewise interpolants of the stored trajectory on [0, t_max], slices
/// being the half-open intervals ((n-1) dt, n dt]. The step versions take
/// the right-endpoint value; the linear versions interpolate the endpoint
/// states. The starred interface velocity is the structure midpoint value
/// v^{n-1/2}, which is exactly the time derivative of the linear
/// displacement interpolant on the slice.
TorusField eval_eta_step(const Trajectory& traj, double t);
TorusField eval_eta_linear(const Trajectory& traj, double t);
TorusField eval_v_step(const Trajectory& traj, double t);
TorusField eval_v_linear(const Trajectory& traj, double t);
TorusField eval_v_half_step(const Trajectory& traj, double t);
ChannelField eval_u_step(const Trajectory& traj, double t);
ChannelField eval_u_linear(const Trajectory& traj, double t);

/// Residual of the combined split step n -> n+1 (0-based n < steps()) paired
/// with a constant-in-time test pair (q, psi): the structure update tested
/// with psi plus the fluid update tested with q, evaluated from the stored
/// states through the quadrature forms. psi must be the interface trace of
/// q; for q in the discrete divergence-free space the pressure pairing drops
/// and the value is bounded by the fluid solver residual.
double monolithic_residual(const Trajectory& traj, int n, const ChannelField& q,
                           const TorusField& psi);

}  // namespace fsi
