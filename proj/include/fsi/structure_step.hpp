#pragma once

#include "fsi/torus_field.hpp"

namespace fsi {

struct StructureParams {
    double gamma = 1.0;  // interface damping coefficient (enters the fluid substep)
    double s = 0.5;      // fractional damping order, required in (0, 1]
    int num_steps = 0;   // N: step count, also scales the 1/N regularization
    double dt = 0.0;     // step size T/N

    void validate() const;
};

struct StructureState {
    TorusField eta;  // interface displacement (3 components)
    TorusField v;    // interface velocity (3 components)
};

/// One implicit plate substep. Per Fourier mode k, with the stiffness symbol
/// mu_k = |k|^4 + |k|^6/N,
///   vhat'   = (vhat - dt mu_k etahat) / (1 + dt^2 mu_k),
///   etahat' = etahat + dt vhat',
/// which is the exact solve of the coupled update (no inner iteration).
/// The zero mode drifts freely: eta_0' = eta_0 + dt v_0.
StructureState advance_structure(const TorusField& eta, const TorusField& v,
                                 const StructureParams& p);

struct StructureEnergy {
    double kinetic = 0.0;         // 1/2 ||v||^2
    double bending = 0.0;         // 1/2 ||Delta eta||^2
    double regularization = 0.0;  // 1/(2N) ||grad^3 eta||^2
    double total() const { return kinetic + bending + regularization; }
};

StructureEnergy structure_energy(const TorusField& eta, const TorusField& v,
                                 const StructureParams& p);

/// Certified substep inequality: with E the structure energy above,
///   E(after) + 1/2||v'-v||^2 + 1/2||Delta(eta'-eta)||^2
///            + 1/(2N)||grad^3(eta'-eta)||^2  <=  E(before),
/// an exact identity for the scheme, so the measured slack is pure roundoff.
/// The stiffness terms here carry the seminorm symbols |k|^4 and |k|^6
/// matching the substep's bilinear form; inhomogeneous-norm variants are not
/// conserved by the update and are not certified.
struct StructureIneqReport {
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;           // rhs - lhs
    double jump_kinetic = 0.0;    // 1/2 ||v'-v||^2
    double jump_bending = 0.0;    // 1/2 ||Delta(eta'-eta)||^2
    double jump_regularization = 0.0;
};

StructureIneqReport check_structure_energy_inequality(const StructureState& before,
                                                      const StructureState& after,
                                                      const StructureParams& p,
                                                      double tol = 1e-8);

}  // namespace fsi
