#pragma once

#include <memory>
#include <vector>

#include "fsi/ale_map.hpp"
#include "fsi/channel_field.hpp"
#include "fsi/gmres.hpp"
#include "fsi/torus_field.hpp"

namespace fsi {

struct FluidParams {
    double nu = 1.0;     // kinematic viscosity
    double gamma = 1.0;  // interface damping coefficient
    double s = 0.5;      // fractional damping order, required in (0, 1]
    double dt = 0.0;
    double rel_tol = 1e-10;  // Krylov relative-residual target, in (0, 1e-4]
    int max_iter = 400;

    void validate() const;
};

/// Unknown layout of the one-step velocity/pressure solve. Velocity
/// components live on full z-levels j = 1..nz-1 (the wall plane j = 0 is
/// eliminated by the no-slip condition); the j = nz-1 plane holds the
/// interface-trace unknowns, shared with the structure velocity, so the
/// kinematic condition holds bitwise by construction. The pressure
/// multiplier lives on staggered half-levels j+1/2, j = 0..nz-2. With the
/// constraint differenced between adjacent levels, every constant-in-z
/// pressure column exerts a net force on the trace rows, so the multiplier
/// has no spurious kernel and no pressure pin is needed.
struct FluidDofMap {
    Grid3d grid;
    int levels = 0;    // velocity z-levels per component (nz - 1)
    size_t plane = 0;  // nodes per horizontal plane
    size_t n_vel = 0;
    size_t n_pre = 0;
    size_t n_total = 0;

    FluidDofMap() = default;
    explicit FluidDofMap(const Grid3d& g);

    size_t vel(int c, int j, int iy, int ix) const {  // j = 1..nz-1
        return ((static_cast<size_t>(c) * levels + (j - 1)) * grid.ny() + iy) * grid.nx() +
               ix;
    }
    size_t pre(int jh, int iy, int ix) const {  // jh = 0..nz-2
        return n_vel + (static_cast<size_t>(jh) * grid.ny() + iy) * grid.nx() + ix;
    }
};

/// One-step saddle operator, held matrix-free: the coefficient fields are
/// captured at assembly and the blocks are applied through the discrete
/// derivative operators and their exact transposes. The velocity-velocity
/// block is symmetric positive definite plus an exactly skew advection
/// part; the pressure coupling pairs the constraint block with its literal
/// transpose in the momentum rows.
struct SaddleSystem {
    FluidDofMap dof;
    FluidParams params;
    ChannelField mass_weight;  // (J^n + J^{n+1})/2 nodewise
    ChannelField jac_n;        // J^n
    ChannelField grad_inv;     // (grad A^n)^{-1}
    ChannelField piola;        // J^n (grad A^n)^{-1}, constraint coefficient
    ChannelField advect;       // (grad A^n)^{-1}(u^n - w^n), transport field
    double visc_coef = 0.0;    // 2 nu dt
    double adv_coef = 0.0;     // dt/2
    double damp_coef = 0.0;    // gamma dt
    double damp_order = 0.0;   // 1 + s (half the spectral symbol exponent)
    std::vector<double> rhs;
};

/// Build the implicit step operator and right-hand side from the previous
/// velocity u_n (full grid, trace plane = previous structure velocity), the
/// half-step structure velocity v_half, and the maps of the enclosing and
/// updated displacement. Throws if either map failed its injectivity gate.
SaddleSystem assemble_fluid_system(const ChannelField& u_n, const TorusField& v_half,
                                   const AleMap& map_n, const AleMap& map_next,
                                   const FluidParams& params);

/// y = saddle operator applied to x (dof layout).
void apply_saddle(const SaddleSystem& sys, const std::vector<double>& x,
                  std::vector<double>& y);

// Individual velocity-block terms on full-grid fields (momentum rows;
// wall-plane rows are zeroed). Exposed for certification tests and for
// form-level residual evaluation; apply_saddle composes exactly these.
ChannelField apply_mass(const SaddleSystem& sys, const ChannelField& u);
ChannelField apply_advection(const SaddleSystem& sys, const ChannelField& u);
ChannelField apply_viscous(const SaddleSystem& sys, const ChannelField& u);
ChannelField apply_trace_terms(const SaddleSystem& sys, const ChannelField& u);

/// Constraint rows: value at half-level j+1/2 is
///   h_xy [ D_x(avg (Pu)_x) + D_y(avg (Pu)_y) + ((Pu)_z(j+1) - (Pu)_z(j))/h_z ]
/// with P = J^n (grad A^n)^{-1} nodewise and avg the two-level mean.
std::vector<double> apply_constraint(const SaddleSystem& sys, const ChannelField& u);

/// Literal transpose of apply_constraint (momentum contribution of the
/// multiplier; the trace rows receive the interface pressure force).
ChannelField apply_constraint_transpose(const SaddleSystem& sys,
                                        const std::vector<double>& p);

/// Max nodal residual of the transformed-divergence constraint, in
/// divergence units (constraint rows rescaled by 1/h_xy).
double divergence_residual(const SaddleSystem& sys, const ChannelField& u);

/// Per-horizontal-mode direct factorization of the flat-geometry operator
/// (identity map, zero transport) with the given coefficients; used as the
/// right preconditioner. Mode-diagonal, so one application costs a plane
/// transform pair per z-level plus small dense back-substitutions. Exact
/// for flat steps without advection.
class FluidPreconditioner {
  public:
    FluidPreconditioner(const Grid3d& grid, double visc_coef, double damp_coef,
                        double damp_order);
    void apply(const FluidDofMap& dof, const std::vector<double>& r,
               std::vector<double>& z) const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// Convenience: preconditioner matching an assembled system's coefficients.
FluidPreconditioner make_preconditioner(const Grid3d& grid, const FluidParams& params);

struct FluidStepResult {
    ChannelField u;  // u^{n+1}, wall plane zero
    TorusField v;    // v^{n+1}, bitwise the z = 1 trace of u
    ChannelField p;  // multiplier scaled by 1/dt and averaged to full levels
    std::vector<double> multiplier;  // raw staggered multiplier
    int iterations = 0;
    double residual = 0.0;  // true relative residual of the saddle solve
    bool converged = false;
    std::vector<double> history;
};

FluidStepResult advance_fluid(const SaddleSystem& sys, const FluidPreconditioner& pre);

struct FluidEnergy {
    double kinetic = 0.0;              // 1/2 int J |u|^2
    double dissipation_density = 0.0;  // 2 nu int J |sym(grad u (grad A)^{-1})|^2
};

/// Quadrature (exact in (x,y), trapezoid in z) of the kinetic energy and the
/// viscous dissipation density of u against the geometry of map.
FluidEnergy fluid_energy(const ChannelField& u, const AleMap& map, double nu);

struct FluidIneqReport {
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
};

/// Certified step inequality: E_next + D_n + jump_u + jump_v <= E_half,
/// where jump_u = 1/2 int J^n |u^{n+1} - u^n|^2 and
/// jump_v = 1/2 ||v^{n+1} - v^{n+1/2}||^2. An identity for the scheme up to
/// the Krylov residual, so the measured slack is solver-level small.
FluidIneqReport check_fluid_energy_inequality(double e_half, double e_next, double d_n,
                                              double jump_u, double jump_v,
                                              double tol = 1e-8);

struct ProjectionResult {
    ChannelField u;
    TorusField v;  // trace of u: the compatible interface velocity
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Orthogonal projection of initial data (u0 with interface velocity v0)
/// onto the discrete constraint space, in the energy inner product
/// (J^0-weighted volume mass plus interface mass). Same saddle machinery
/// with the mass-only velocity block.
ProjectionResult project_divergence_free(const ChannelField& u0, const TorusField& v0,
                                         const AleMap& map0, double rel_tol = 1e-12,
                                         int max_iter = 400);

}  // namespace fsi
