#include "fsi/splitting_driver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "fsi/torus_spectral.hpp"

namespace fsi {

void DriverParams::validate() const {
    if (nx < 4 || ny < 4)
        throw std::invalid_argument("DriverParams: need nx, ny >= 4");
    if (nz < 5) throw std::invalid_argument("DriverParams: need nz >= 5");
    if (num_steps < 1) throw std::invalid_argument("DriverParams: num_steps >= 1");
    if (t_final <= 0.0) throw std::invalid_argument("DriverParams: t_final > 0");
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("DriverParams: delta must lie in (0, 1)");
    structure().validate();
    fluid().validate();
}

StructureParams DriverParams::structure() const {
    StructureParams p;
    p.gamma = gamma;
    p.s = s;
    p.num_steps = num_steps;
    p.dt = dt();
    return p;
}

FluidParams DriverParams::fluid() const {
    FluidParams p;
    p.nu = nu;
    p.gamma = gamma;
    p.s = s;
    p.dt = dt();
    p.rel_tol = rel_tol;
    p.max_iter = max_iter;
    return p;
}

InitialData zero_initial_data(const DriverParams& p) {
    const Grid2d g2(p.nx, p.ny);
    InitialData d;
    d.eta0 = TorusField(g2, 3);
    d.v0 = TorusField(g2, 3);
    d.u0 = ChannelField(Grid3d(p.nx, p.ny, p.nz), 3);
    return d;
}

namespace {

void zero_wall_plane(ChannelField& f) {
    const int np = f.grid.horiz.size();
    for (int c = 0; c < f.ncomp; ++c) {
        double* p = f.plane(c, 0);
        for (int i = 0; i < np; ++i) p[i] = 0.0;
    }
}

// (a . grad) u with the module's discrete derivatives.
ChannelField convect(const ChannelField& a, const ChannelField& u) {
    const ChannelField du[3] = {deriv_x(u), deriv_y(u), deriv_z(u)};
    ChannelField out(u.grid, 3);
    const size_t n = static_cast<size_t>(u.grid.nodes());
    for (int c = 0; c < 3; ++c)
        for (int e = 0; e < 3; ++e)
            for (size_t i = 0; i < n; ++i)
                out.data[c * n + i] += a.data[e * n + i] * du[e].data[c * n + i];
    return out;
}

// Contravariant transport field (grad A)^{-1} (u - w) of the fluid substep.
ChannelField transport_field(const AleMap& map_n, const ChannelField& u_n,
                             const ChannelField& w) {
    const size_t n = static_cast<size_t>(map_n.grid.nodes());
    ChannelField rel(map_n.grid, 3);
    for (size_t i = 0; i < rel.data.size(); ++i) rel.data[i] = u_n.data[i] - w.data[i];
    ChannelField a(map_n.grid, 3);
    for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
            const double* gi =
                map_n.grad_a_inv.data.data() + static_cast<size_t>(3 * c + d) * n;
            const double* rv = rel.data.data() + d * n;
            double* dst = a.data.data() + c * n;
            for (size_t i = 0; i < n; ++i) dst[i] += gi[i] * rv[i];
        }
    return a;
}

// Smallest slice index n with t <= n dt, within rounding slop.
int slice_index(const Trajectory& traj, double t) {
    const double dt = traj.params.dt();
    const int m = traj.steps();
    if (t < -1e-9 * dt || t > (m + 1e-9) * dt)
        throw std::out_of_range("trajectory evaluation outside [0, t_max]");
    int n = static_cast<int>(std::ceil(t / dt - 1e-9));
    if (n < 0) n = 0;
    if (n > m) n = m;
    return n;
}

TorusField blend(const TorusField& a, const TorusField& b, double theta) {
    TorusField out = a;
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = (1.0 - theta) * a.data[i] + theta * b.data[i];
    return out;
}

ChannelField blend(const ChannelField& a, const ChannelField& b, double theta) {
    ChannelField out = a;
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = (1.0 - theta) * a.data[i] + theta * b.data[i];
    return out;
}

// Slice and local coordinate for the linear interpolants.
std::pair<int, double> linear_locus(const Trajectory& traj, double t) {
    const double dt = traj.params.dt();
    int n = slice_index(traj, t);
    if (n < 1) n = 1;
    double theta = t / dt - (n - 1);
    if (theta < 0.0) theta = 0.0;
    if (theta > 1.0) theta = 1.0;
    return {n, theta};
}

}  // namespace

RunResult run_splitting(const DriverParams& dp, const InitialData& init,
                        const StepObserver& observer) {
    dp.validate();
    const Grid3d grid(dp.nx, dp.ny, dp.nz);
    const Grid2d g2 = grid.horiz;
    if (init.eta0.grid != g2 || init.eta0.ncomp != 3 || init.v0.grid != g2 ||
        init.v0.ncomp != 3)
        throw std::invalid_argument("run_splitting: interface data shape mismatch");
    if (init.u0.grid != grid || init.u0.ncomp != 3)
        throw std::invalid_argument("run_splitting: fluid data shape mismatch");

    const double dt = dp.dt();
    const StructureParams sp = dp.structure();
    const FluidParams fp = dp.fluid();

    AleMap map0 = harmonic_extension(init.eta0, dp.nz);
    const double alpha = dp.alpha > 0.0 ? dp.alpha : 0.5 * map0.min_jacobian;
    if (alpha <= 0.0)
        throw std::invalid_argument(
            "run_splitting: initial map degenerate, cannot anchor the contact floor");
    map0.alpha = alpha;
    map0.injective = map0.min_jacobian > alpha;

    RunResult out;
    out.alpha = alpha;

    Trajectory traj;
    traj.grid = grid;
    traj.params = dp;
    traj.params.alpha = alpha;

    FsiState cur;
    cur.t = 0.0;
    cur.structure.eta = init.eta0;
    cur.map = map0;
    cur.p = ChannelField(grid, 1);

    const InjectivityReport gate0 = injectivity_check(map0, alpha, dp.delta);
    if (!gate0.pass) {
        // Already in contact before the first step.
        cur.structure.v = init.v0;
        cur.u = init.u0;
        traj.eta.push_back(init.eta0);
        traj.v.push_back(init.v0);
        traj.u.push_back(init.u0);
        out.contact = ContactInfo{true, 0, gate0.min_jacobian, gate0.eta_h2delta};
        out.state = std::move(cur);
        out.trajectory = std::move(traj);
        return out;
    }

    ChannelField u0 = init.u0;
    TorusField v0 = init.v0;
    zero_wall_plane(u0);
    if (dp.project_initial) {
        const ProjectionResult proj = project_divergence_free(
            u0, v0, map0, std::min(1e-12, dp.rel_tol), dp.max_iter);
        if (!proj.converged)
            throw std::runtime_error("run_splitting: initial projection did not converge");
        u0 = proj.u;
        v0 = proj.v;
    } else {
        set_trace_top(u0, v0);
    }
    cur.structure.v = v0;
    cur.u = u0;
    traj.eta.push_back(init.eta0);
    traj.v.push_back(v0);
    traj.u.push_back(u0);

    const FluidPreconditioner pre = make_preconditioner(grid, fp);

    for (int n = 0; n < dp.num_steps; ++n) {
        // Structure substep; it fixes the geometry for the rest of the step.
        const StructureState before = cur.structure;
        StructureState half = advance_structure(before.eta, before.v, sp);
        AleMap map_next = harmonic_extension(half.eta, dp.nz, alpha);
        const InjectivityReport gate = injectivity_check(map_next, alpha, dp.delta);
        if (!gate.pass) {
            out.contact = ContactInfo{true, n + 1, gate.min_jacobian, gate.eta_h2delta};
            break;
        }

        // Fluid substep on the frozen geometry.
        const SaddleSystem sys =
            assemble_fluid_system(cur.u, half.v, cur.map, map_next, fp);
        FluidStepResult fr = advance_fluid(sys, pre);
        if (!fr.converged)
            throw std::runtime_error("run_splitting: fluid solver stalled at step " +
                                     std::to_string(n + 1) + " (residual " +
                                     std::to_string(fr.residual) + ")");

        // Energy bookkeeping for the ledger.
        StepRecord rec;
        rec.step = n + 1;
        rec.t = (n + 1) * dt;
        const double ke_n = fluid_energy(cur.u, cur.map, fp.nu).kinetic;
        rec.e_n = ke_n + structure_energy(before.eta, before.v, sp).total();
        rec.e_half = ke_n + structure_energy(half.eta, half.v, sp).total();
        rec.e_next = fluid_energy(fr.u, map_next, fp.nu).kinetic +
                     structure_energy(half.eta, fr.v, sp).total();
        rec.d_n = dt * fluid_energy(fr.u, cur.map, fp.nu).dissipation_density +
                  dp.gamma * dt * std::pow(lambda_seminorm(fr.v, 1.0 + dp.s), 2);

        ChannelField du(grid, 3);
        for (size_t i = 0; i < du.data.size(); ++i)
            du.data[i] = fr.u.data[i] - cur.u.data[i];
        const double jump_u = 0.5 * volume_inner_weighted(cur.map.jac, du, du);
        TorusField dv(g2, 3);
        for (size_t i = 0; i < dv.data.size(); ++i)
            dv.data[i] = fr.v.data[i] - half.v.data[i];
        const double jump_v = 0.5 * std::pow(l2_norm(dv), 2);

        const StructureIneqReport srep =
            check_structure_energy_inequality(before, half, sp);
        rec.c_n = srep.jump_kinetic + srep.jump_bending + srep.jump_regularization +
                  jump_u + jump_v;
        rec.struct_slack = srep.slack;
        rec.struct_pass = srep.pass;
        const FluidIneqReport frep = check_fluid_energy_inequality(
            rec.e_half, rec.e_next, rec.d_n, jump_u, jump_v);
        rec.fluid_slack = frep.slack;
        rec.fluid_pass = frep.pass;
        rec.min_jacobian = gate.min_jacobian;
        rec.eta_h2delta = gate.eta_h2delta;
        rec.solver_iters = fr.iterations;
        rec.solver_residual = fr.residual;
        traj.ledger.push_back(rec);

        traj.eta.push_back(half.eta);
        traj.v_half.push_back(half.v);
        traj.v.push_back(fr.v);
        traj.u.push_back(fr.u);

        cur.t = rec.t;
        cur.structure.eta = std::move(half.eta);
        cur.structure.v = std::move(fr.v);
        cur.map = std::move(map_next);
        cur.u = std::move(fr.u);
        cur.p = std::move(fr.p);
        if (observer) observer(rec, cur);
    }

    out.t_max = traj.steps() * dt;
    out.completed = traj.steps() == dp.num_steps;
    out.state = std::move(cur);
    out.trajectory = std::move(traj);
    return out;
}

TorusField eval_eta_step(const Trajectory& traj, double t) {
    return traj.eta[slice_index(traj, t)];
}

TorusField eval_v_step(const Trajectory& traj, double t) {
    return traj.v[slice_index(traj, t)];
}

ChannelField eval_u_step(const Trajectory& traj, double t) {
    return traj.u[slice_index(traj, t)];
}

TorusField eval_v_half_step(const Trajectory& traj, double t) {
    if (traj.steps() == 0)
        throw std::out_of_range("eval_v_half_step: no completed steps");
    int n = slice_index(traj, t);
    if (n < 1) n = 1;
    return traj.v_half[n - 1];
}

TorusField eval_eta_linear(const Trajectory& traj, double t) {
    if (traj.steps() == 0) return traj.eta[0];
    const auto [n, theta] = linear_locus(traj, t);
    return blend(traj.eta[n - 1], traj.eta[n], theta);
}

TorusField eval_v_linear(const Trajectory& traj, double t) {
    if (traj.steps() == 0) return traj.v[0];
    const auto [n, theta] = linear_locus(traj, t);
    return blend(traj.v[n - 1], traj.v[n], theta);
}

ChannelField eval_u_linear(const Trajectory& traj, double t) {
    if (traj.steps() == 0) return traj.u[0];
    const auto [n, theta] = linear_locus(traj, t);
    return blend(traj.u[n - 1], traj.u[n], theta);
}

double monolithic_residual(const Trajectory& traj, int n, const ChannelField& q,
                           const TorusField& psi) {
    const DriverParams& dp = traj.params;
    if (n < 0 || n >= traj.steps())
        throw std::out_of_range("monolithic_residual: step out of range");
    if (q.grid != traj.grid || q.ncomp != 3)
        throw std::invalid_argument("monolithic_residual: q shape mismatch");
    if (psi.grid != traj.grid.horiz || psi.ncomp != 3)
        throw std::invalid_argument("monolithic_residual: psi shape mismatch");
    const TorusField tq = trace_top(q);
    for (size_t i = 0; i < tq.data.size(); ++i)
        if (tq.data[i] != psi.data[i])
            throw std::invalid_argument(
                "monolithic_residual: psi must be the interface trace of q");
    const int np = traj.grid.horiz.size();
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < np; ++i)
            if (q.plane(c, 0)[i] != 0.0)
                throw std::invalid_argument(
                    "monolithic_residual: q must vanish on the wall plane");

    const Grid3d& g = traj.grid;
    const double dt = dp.dt();
    const AleMap map_n = harmonic_extension(traj.eta[n], dp.nz);
    const AleMap map_x = harmonic_extension(traj.eta[n + 1], dp.nz);
    const ChannelField& u_n = traj.u[n];
    const ChannelField& u_x = traj.u[n + 1];

    double acc = 0.0;

    ChannelField du(g, 3);
    for (size_t i = 0; i < du.data.size(); ++i) du.data[i] = u_x.data[i] - u_n.data[i];
    acc += volume_inner_weighted(map_n.jac, du, q);

    ChannelField djac(g, 1);
    for (size_t i = 0; i < djac.data.size(); ++i)
        djac.data[i] = map_x.jac.data[i] - map_n.jac.data[i];
    acc += 0.5 * volume_inner_weighted(djac, u_x, q);

    const ChannelField w = ale_velocity(map_n, map_x, dt);
    const ChannelField a = transport_field(map_n, u_n, w);
    acc += 0.5 * dt *
           (volume_inner_weighted(map_n.jac, convect(a, u_x), q) -
            volume_inner_weighted(map_n.jac, convect(a, q), u_x));

    acc += 2.0 * dp.nu * dt *
           volume_inner_weighted(map_n.jac,
                                 symmetric_part(transformed_gradient(map_n, u_x)),
                                 symmetric_part(transformed_gradient(map_n, q)));

    TorusField dv(g.horiz, 3);
    for (size_t i = 0; i < dv.data.size(); ++i)
        dv.data[i] = traj.v[n + 1].data[i] - traj.v[n].data[i];
    acc += l2_inner(dv, psi);

    const TorusField& eta_x = traj.eta[n + 1];
    acc += dt * l2_inner(apply_fractional_laplacian(eta_x, 2.0),
                         apply_fractional_laplacian(psi, 2.0));
    acc += dt / dp.num_steps *
           l2_inner(apply_fractional_laplacian(eta_x, 3.0),
                    apply_fractional_laplacian(psi, 3.0));
    acc += dp.gamma * dt *
           l2_inner(apply_fractional_laplacian(traj.v[n + 1], 1.0 + dp.s),
                    apply_fractional_laplacian(psi, 1.0 + dp.s));
    return acc;
}

}  // namespace fsi
