#include "fsi/structure_step.hpp"

#include <cmath>
#include <stdexcept>

#include "fsi/torus_spectral.hpp"

namespace fsi {

void StructureParams::validate() const {
    if (!(s > 0.0 && s <= 1.0))
        throw std::invalid_argument("StructureParams: s must lie in (0, 1]");
    if (!(dt > 0.0)) throw std::invalid_argument("StructureParams: dt must be positive");
    if (num_steps < 1)
        throw std::invalid_argument("StructureParams: num_steps must be >= 1");
    if (gamma < 0.0)
        throw std::invalid_argument("StructureParams: gamma must be >= 0");
}

StructureState advance_structure(const TorusField& eta, const TorusField& v,
                                 const StructureParams& p) {
    p.validate();
    if (eta.grid != v.grid || eta.ncomp != 3 || v.ncomp != 3)
        throw std::invalid_argument("advance_structure: eta/v must be matching vector fields");

    SpectralCoeffs ehat = to_spectral(eta);
    SpectralCoeffs vhat = to_spectral(v);
    const Grid2d& g = eta.grid;
    const double dt = p.dt;
    for (int c = 0; c < 3; ++c)
        for (int iky = 0; iky < g.ny; ++iky)
            for (int ikx = 0; ikx < g.nkx(); ++ikx) {
                const double k2 = mode_ksq(g, iky, ikx);
                const double mu = k2 * k2 + k2 * k2 * k2 / p.num_steps;
                auto& ve = vhat.at(c, iky, ikx);
                auto& ee = ehat.at(c, iky, ikx);
                ve = (ve - dt * mu * ee) / (1.0 + dt * dt * mu);
                ee += dt * ve;
            }
    return {to_physical(ehat), to_physical(vhat)};
}

StructureEnergy structure_energy(const TorusField& eta, const TorusField& v,
                                 const StructureParams& p) {
    p.validate();
    StructureEnergy e;
    const double nv = l2_norm(v);
    e.kinetic = 0.5 * nv * nv;
    const double nb = lambda_seminorm(eta, 2.0);
    e.bending = 0.5 * nb * nb;
    const double nr = lambda_seminorm(eta, 3.0);
    e.regularization = 0.5 * nr * nr / p.num_steps;
    return e;
}

StructureIneqReport check_structure_energy_inequality(const StructureState& before,
                                                      const StructureState& after,
                                                      const StructureParams& p,
                                                      double tol) {
    StructureIneqReport r;
    TorusField dv = after.v, de = after.eta;
    for (size_t i = 0; i < dv.data.size(); ++i) {
        dv.data[i] -= before.v.data[i];
        de.data[i] -= before.eta.data[i];
    }
    const double jv = l2_norm(dv);
    const double jb = lambda_seminorm(de, 2.0);
    const double jr = lambda_seminorm(de, 3.0);
    r.jump_kinetic = 0.5 * jv * jv;
    r.jump_bending = 0.5 * jb * jb;
    r.jump_regularization = 0.5 * jr * jr / p.num_steps;
    r.lhs = structure_energy(after.eta, after.v, p).total() + r.jump_kinetic +
            r.jump_bending + r.jump_regularization;
    r.rhs = structure_energy(before.eta, before.v, p).total();
    r.slack = r.rhs - r.lhs;
    r.pass = r.lhs <= r.rhs + tol * std::max(1.0, std::abs(r.rhs));
    return r;
}

}  // namespace fsi
