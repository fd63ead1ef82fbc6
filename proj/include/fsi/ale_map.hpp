#pragma once

#include "fsi/channel_field.hpp"
#include "fsi/torus_field.hpp"

namespace fsi {

/// ALE change of variables A = id + B on the reference channel, where B is
/// the componentwise harmonic extension of the interface displacement eta
/// (Dirichlet data eta at z = 1, zero at z = 0). Horizontal structure is
/// spectral, the vertical profile of each mode is evaluated in closed form,
/// so gradients are exact in z and derivatives in (x,y) are spectral.
struct AleMap {
    Grid3d grid;
    TorusField eta;            // generating displacement (3 components)
    ChannelField a;            // map values A
    ChannelField grad_a;       // (grad A)_{cd} = dA_c/dx_d
    ChannelField grad_a_inv;   // (grad A)^{-1}, defined where jac != 0
    ChannelField jac;          // det grad A, nodewise
    double min_jacobian = 0.0;
    double alpha = 0.0;        // contact threshold used for the verdict
    bool injective = false;    // min_jacobian > alpha
};

/// Build the map on an nz-level channel grid. alpha gates the stored
/// injectivity verdict (alpha = 0 means plain positivity).
AleMap harmonic_extension(const TorusField& eta, int nz, double alpha = 0.0);

struct InjectivityReport {
    double min_jacobian = 0.0;
    double eta_h2delta = 0.0;  // ||eta||_{H^{2+delta}} advisory
    bool pass = false;
};

/// Contact gate: pass iff min nodewise Jacobian exceeds alpha.
InjectivityReport injectivity_check(const AleMap& map, double alpha, double delta);

/// Piola transform J (grad A)^{-1} g, vector -> vector. Rejects maps whose
/// injectivity verdict failed.
ChannelField piola_transform(const AleMap& map, const ChannelField& g);

/// Transformed gradient grad g (grad A)^{-1}, vector -> tensor; compose with
/// symmetric_part for the transformed rate-of-strain.
ChannelField transformed_gradient(const AleMap& map, const ChannelField& g);

/// Discrete ALE domain velocity (A_next - A_prev)/dt.
ChannelField ale_velocity(const AleMap& prev, const AleMap& next, double dt);

/// Nodewise (J_next - J_prev)/dt.
ChannelField jacobian_time_difference(const AleMap& prev, const AleMap& next, double dt);

}  // namespace fsi
