#include "fsi/fluid_step.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "fsi/fft.hpp"
#include "fsi/torus_spectral.hpp"

namespace fsi {

void FluidParams::validate() const {
    if (nu <= 0.0) throw std::invalid_argument("FluidParams: nu must be positive");
    if (gamma < 0.0) throw std::invalid_argument("FluidParams: gamma must be nonnegative");
    if (s <= 0.0 || s > 1.0)
        throw std::invalid_argument("FluidParams: s must lie in (0, 1]");
    if (dt <= 0.0) throw std::invalid_argument("FluidParams: dt must be positive");
    if (rel_tol <= 0.0 || rel_tol > 1e-4)
        throw std::invalid_argument("FluidParams: rel_tol must lie in (0, 1e-4]");
    if (max_iter < 1) throw std::invalid_argument("FluidParams: max_iter must be >= 1");
}

FluidDofMap::FluidDofMap(const Grid3d& g) : grid(g) {
    levels = g.nz - 1;
    plane = static_cast<size_t>(g.horiz.size());
    n_vel = 3 * static_cast<size_t>(levels) * plane;
    n_pre = static_cast<size_t>(g.nz - 1) * plane;
    n_total = n_vel + n_pre;
}

namespace {

// Nodewise (G b)_c = sum_d G_{cd} b_d.
ChannelField tensor_vector(const ChannelField& g, const ChannelField& b) {
    ChannelField out(b.grid, 3);
    const size_t n = static_cast<size_t>(b.grid.nodes());
    for (int c = 0; c < 3; ++c) {
        double* dst = out.data.data() + c * n;
        for (int d = 0; d < 3; ++d) {
            const double* gm = g.data.data() + static_cast<size_t>(3 * c + d) * n;
            const double* bv = b.data.data() + d * n;
            for (size_t i = 0; i < n; ++i) dst[i] += gm[i] * bv[i];
        }
    }
    return out;
}

// Nodewise (G^T b)_c = sum_d G_{dc} b_d.
ChannelField tensor_transpose_vector(const ChannelField& g, const ChannelField& b) {
    ChannelField out(b.grid, 3);
    const size_t n = static_cast<size_t>(b.grid.nodes());
    for (int c = 0; c < 3; ++c) {
        double* dst = out.data.data() + c * n;
        for (int d = 0; d < 3; ++d) {
            const double* gm = g.data.data() + static_cast<size_t>(3 * d + c) * n;
            const double* bv = b.data.data() + d * n;
            for (size_t i = 0; i < n; ++i) dst[i] += gm[i] * bv[i];
        }
    }
    return out;
}

// Nodewise (T G)_{cd} = sum_e T_{ce} G_{ed}.
ChannelField tensor_tensor(const ChannelField& t, const ChannelField& g) {
    ChannelField out(t.grid, 9);
    const size_t n = static_cast<size_t>(t.grid.nodes());
    for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
            double* dst = out.data.data() + static_cast<size_t>(3 * c + d) * n;
            for (int e = 0; e < 3; ++e) {
                const double* tm = t.data.data() + static_cast<size_t>(3 * c + e) * n;
                const double* gm = g.data.data() + static_cast<size_t>(3 * e + d) * n;
                for (size_t i = 0; i < n; ++i) dst[i] += tm[i] * gm[i];
            }
        }
    return out;
}

// Nodewise (T G^T)_{ce} = sum_d T_{cd} G_{ed}.
ChannelField tensor_tensor_transpose(const ChannelField& t, const ChannelField& g) {
    ChannelField out(t.grid, 9);
    const size_t n = static_cast<size_t>(t.grid.nodes());
    for (int c = 0; c < 3; ++c)
        for (int e = 0; e < 3; ++e) {
            double* dst = out.data.data() + static_cast<size_t>(3 * c + e) * n;
            for (int d = 0; d < 3; ++d) {
                const double* tm = t.data.data() + static_cast<size_t>(3 * c + d) * n;
                const double* gm = g.data.data() + static_cast<size_t>(3 * e + d) * n;
                for (size_t i = 0; i < n; ++i) dst[i] += tm[i] * gm[i];
            }
        }
    return out;
}

// out = coef * wz(j) * h_xy * weight * f, nodewise (any ncomp).
ChannelField quad_scale(const ChannelField& w, const ChannelField& f, double coef) {
    ChannelField out(f.grid, f.ncomp);
    const Grid3d& g = f.grid;
    const int np = g.horiz.size();
    for (int c = 0; c < f.ncomp; ++c)
        for (int j = 0; j < g.nz; ++j) {
            const double s = coef * g.wz(j) * g.horiz.cell_area();
            const double* pw = w.plane(0, j);
            const double* pf = f.plane(c, j);
            double* po = out.plane(c, j);
            for (int i = 0; i < np; ++i) po[i] = s * pw[i] * pf[i];
        }
    return out;
}

void zero_wall_rows(ChannelField& f) {
    const int np = f.grid.horiz.size();
    for (int c = 0; c < f.ncomp; ++c) {
        double* p = f.plane(c, 0);
        for (int i = 0; i < np; ++i) p[i] = 0.0;
    }
}

void add_field(ChannelField& acc, const ChannelField& f) {
    for (size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += f.data[i];
}

void scatter_velocity(const FluidDofMap& dof, const std::vector<double>& x,
                      ChannelField& u) {
    const int np = dof.grid.horiz.size();
    for (int c = 0; c < 3; ++c) {
        double* wall = u.plane(c, 0);
        for (int i = 0; i < np; ++i) wall[i] = 0.0;
        for (int j = 1; j < dof.grid.nz; ++j) {
            const double* src = x.data() + dof.vel(c, j, 0, 0);
            double* dst = u.plane(c, j);
            for (int i = 0; i < np; ++i) dst[i] = src[i];
        }
    }
}

void gather_momentum(const FluidDofMap& dof, const ChannelField& y,
                     std::vector<double>& out) {
    const int np = dof.grid.horiz.size();
    for (int c = 0; c < 3; ++c)
        for (int j = 1; j < dof.grid.nz; ++j) {
            const double* src = y.plane(c, j);
            double* dst = out.data() + dof.vel(c, j, 0, 0);
            for (int i = 0; i < np; ++i) dst[i] = src[i];
        }
}

}  // namespace

ChannelField apply_mass(const SaddleSystem& sys, const ChannelField& u) {
    ChannelField out = quad_scale(sys.mass_weight, u, 1.0);
    zero_wall_rows(out);
    return out;
}

ChannelField apply_advection(const SaddleSystem& sys, const ChannelField& u) {
    const Grid3d& g = u.grid;
    const size_t n = static_cast<size_t>(g.nodes());
    const ChannelField du[3] = {deriv_x(u), deriv_y(u), deriv_z(u)};
    ChannelField conv(g, 3);
    for (int c = 0; c < 3; ++c) {
        double* dst = conv.data.data() + c * n;
        for (int e = 0; e < 3; ++e) {
            const double* ae = sys.advect.data.data() + e * n;
            const double* de = du[e].data.data() + c * n;
            for (size_t i = 0; i < n; ++i) dst[i] += ae[i] * de[i];
        }
    }
    ChannelField out = quad_scale(sys.jac_n, conv, sys.adv_coef);
    // Skew partner: subtract sum_e D_e^T diag(a_e) applied to the weighted u.
    ChannelField wu = quad_scale(sys.jac_n, u, sys.adv_coef);
    for (int e = 0; e < 3; ++e) {
        ChannelField s(g, 3);
        const double* ae = sys.advect.data.data() + e * n;
        for (int c = 0; c < 3; ++c) {
            const double* src = wu.data.data() + c * n;
            double* dst = s.data.data() + c * n;
            for (size_t i = 0; i < n; ++i) dst[i] = ae[i] * src[i];
        }
        const ChannelField t = (e == 0)   ? deriv_x_transpose(s)
                               : (e == 1) ? deriv_y_transpose(s)
                                          : deriv_z_transpose(s);
        for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= t.data[i];
    }
    zero_wall_rows(out);
    return out;
}

ChannelField apply_viscous(const SaddleSystem& sys, const ChannelField& u) {
    const Grid3d& g = u.grid;
    const size_t n = static_cast<size_t>(g.nodes());
    const ChannelField strain =
        symmetric_part(tensor_tensor(channel_gradient(u), sys.grad_inv));
    const ChannelField s = quad_scale(sys.jac_n, strain, sys.visc_coef);
    const ChannelField back = tensor_tensor_transpose(s, sys.grad_inv);
    ChannelField out(g, 3);
    for (int e = 0; e < 3; ++e) {
        ChannelField slice(g, 3);
        for (int c = 0; c < 3; ++c) {
            const double* src = back.data.data() + static_cast<size_t>(3 * c + e) * n;
            double* dst = slice.data.data() + c * n;
            for (size_t i = 0; i < n; ++i) dst[i] = src[i];
        }
        const ChannelField t = (e == 0)   ? deriv_x_transpose(slice)
                               : (e == 1) ? deriv_y_transpose(slice)
                                          : deriv_z_transpose(slice);
        add_field(out, t);
    }
    zero_wall_rows(out);
    return out;
}

ChannelField apply_trace_terms(const SaddleSystem& sys, const ChannelField& u) {
    ChannelField out(u.grid, 3);
    TorusField acc = trace_top(u);
    if (sys.damp_coef != 0.0) {
        const TorusField lam = apply_fractional_laplacian(acc, 2.0 * sys.damp_order);
        for (size_t i = 0; i < acc.data.size(); ++i)
            acc.data[i] += sys.damp_coef * lam.data[i];
    }
    const double hxy = u.grid.horiz.cell_area();
    for (double& v : acc.data) v *= hxy;
    set_trace_top(out, acc);
    return out;
}

std::vector<double> apply_constraint(const SaddleSystem& sys, const ChannelField& u) {
    const Grid3d& g = u.grid;
    const ChannelField pu = tensor_vector(sys.piola, u);
    const int np = g.horiz.size();
    const double hxy = g.horiz.cell_area();
    const double ihz = 1.0 / g.hz();
    std::vector<double> out(sys.dof.n_pre, 0.0);
    std::vector<double> avg(np), der(np);
    for (int jh = 0; jh < g.nz - 1; ++jh) {
        double* row = out.data() + static_cast<size_t>(jh) * np;
        for (int d = 0; d < 2; ++d) {
            const double* lo = pu.plane(d, jh);
            const double* hi = pu.plane(d, jh + 1);
            for (int i = 0; i < np; ++i) avg[i] = 0.5 * (lo[i] + hi[i]);
            if (d == 0)
                plane_deriv_x(g.horiz, avg.data(), der.data());
            else
                plane_deriv_y(g.horiz, avg.data(), der.data());
            for (int i = 0; i < np; ++i) row[i] += hxy * der[i];
        }
        const double* lo = pu.plane(2, jh);
        const double* hi = pu.plane(2, jh + 1);
        for (int i = 0; i < np; ++i) row[i] += hxy * ihz * (hi[i] - lo[i]);
    }
    return out;
}

ChannelField apply_constraint_transpose(const SaddleSystem& sys,
                                        const std::vector<double>& p) {
    const Grid3d& g = sys.dof.grid;
    if (p.size() != sys.dof.n_pre)
        throw std::invalid_argument("apply_constraint_transpose: bad multiplier size");
    const int np = g.horiz.size();
    const double hxy = g.horiz.cell_area();
    const double ihz = 1.0 / g.hz();
    ChannelField pre(g, 3);  // accumulators before the Piola transpose
    std::vector<double> der(np);
    for (int jh = 0; jh < g.nz - 1; ++jh) {
        const double* row = p.data() + static_cast<size_t>(jh) * np;
        for (int d = 0; d < 2; ++d) {
            if (d == 0)
                plane_deriv_x(g.horiz, row, der.data(), true);
            else
                plane_deriv_y(g.horiz, row, der.data(), true);
            for (int j : {jh, jh + 1}) {
                double* dst = pre.plane(d, j);
                for (int i = 0; i < np; ++i) dst[i] += 0.5 * hxy * der[i];
            }
        }
        double* hi = pre.plane(2, jh + 1);
        double* lo = pre.plane(2, jh);
        for (int i = 0; i < np; ++i) {
            hi[i] += hxy * ihz * row[i];
            lo[i] -= hxy * ihz * row[i];
        }
    }
    ChannelField out = tensor_transpose_vector(sys.piola, pre);
    zero_wall_rows(out);
    return out;
}

double divergence_residual(const SaddleSystem& sys, const ChannelField& u) {
    const std::vector<double> c = apply_constraint(sys, u);
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m / sys.dof.grid.horiz.cell_area();
}

void apply_saddle(const SaddleSystem& sys, const std::vector<double>& x,
                  std::vector<double>& y) {
    const FluidDofMap& dof = sys.dof;
    if (x.size() != dof.n_total) throw std::invalid_argument("apply_saddle: bad size");
    y.assign(dof.n_total, 0.0);
    ChannelField u(dof.grid, 3);
    scatter_velocity(dof, x, u);
    ChannelField acc = apply_mass(sys, u);
    if (sys.adv_coef != 0.0) add_field(acc, apply_advection(sys, u));
    if (sys.visc_coef != 0.0) add_field(acc, apply_viscous(sys, u));
    add_field(acc, apply_trace_terms(sys, u));
    const std::vector<double> mult(x.begin() + dof.n_vel, x.end());
    add_field(acc, apply_constraint_transpose(sys, mult));
    gather_momentum(dof, acc, y);
    const std::vector<double> con = apply_constraint(sys, u);
    std::copy(con.begin(), con.end(), y.begin() + dof.n_vel);
}

SaddleSystem assemble_fluid_system(const ChannelField& u_n, const TorusField& v_half,
                                   const AleMap& map_n, const AleMap& map_next,
                                   const FluidParams& params) {
    params.validate();
    const Grid3d& g = map_n.grid;
    if (u_n.grid != g || u_n.ncomp != 3)
        throw std::invalid_argument("assemble_fluid_system: u_n shape mismatch");
    if (v_half.grid != g.horiz || v_half.ncomp != 3)
        throw std::invalid_argument("assemble_fluid_system: v_half shape mismatch");
    if (map_next.grid != g)
        throw std::invalid_argument("assemble_fluid_system: map grids differ");
    if (!map_n.injective || !map_next.injective)
        throw std::runtime_error(
            "assemble_fluid_system: contact: map failed the injectivity gate");

    SaddleSystem sys;
    sys.dof = FluidDofMap(g);
    sys.params = params;
    sys.visc_coef = 2.0 * params.nu * params.dt;
    sys.adv_coef = 0.5 * params.dt;
    sys.damp_coef = params.gamma * params.dt;
    sys.damp_order = 1.0 + params.s;

    sys.jac_n = map_n.jac;
    sys.grad_inv = map_n.grad_a_inv;
    const size_t n = static_cast<size_t>(g.nodes());
    sys.mass_weight = ChannelField(g, 1);
    for (size_t i = 0; i < n; ++i)
        sys.mass_weight.data[i] = 0.5 * (map_n.jac.data[i] + map_next.jac.data[i]);
    sys.piola = ChannelField(g, 9);
    for (int c = 0; c < 9; ++c)
        for (size_t i = 0; i < n; ++i)
            sys.piola.data[c * n + i] = map_n.jac.data[i] * sys.grad_inv.data[c * n + i];

    const ChannelField w = ale_velocity(map_n, map_next, params.dt);
    ChannelField rel(g, 3);
    for (size_t i = 0; i < rel.data.size(); ++i) rel.data[i] = u_n.data[i] - w.data[i];
    sys.advect = tensor_vector(sys.grad_inv, rel);

    sys.rhs.assign(sys.dof.n_total, 0.0);
    ChannelField f = quad_scale(sys.jac_n, u_n, 1.0);
    zero_wall_rows(f);
    gather_momentum(sys.dof, f, sys.rhs);
    const double hxy = g.horiz.cell_area();
    const int top = g.nz - 1;
    for (int c = 0; c < 3; ++c)
        for (int iy = 0; iy < g.ny(); ++iy)
            for (int ix = 0; ix < g.nx(); ++ix)
                sys.rhs[sys.dof.vel(c, top, iy, ix)] += hxy * v_half.at(c, iy, ix);
    return sys;
}

struct FluidPreconditioner::Impl {
    Grid3d grid;
    int levels = 0;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu;  // slot iky*nkx + ikx
};

FluidPreconditioner::FluidPreconditioner(const Grid3d& grid, double visc_coef,
                                         double damp_coef, double damp_order)
    : impl_(std::make_shared<Impl>()) {
    using Mat = Eigen::MatrixXcd;
    using Cplx = std::complex<double>;
    Impl& im = *impl_;
    im.grid = grid;
    const int nz = grid.nz, M = nz - 1;
    im.levels = M;
    const Grid2d& h = grid.horiz;
    const int nkx = h.nkx();
    const double hxy = h.cell_area();
    const double ihz = 1.0 / grid.hz();

    Eigen::MatrixXd dzf = Eigen::MatrixXd::Zero(nz, nz);
    dzf(0, 0) = -1.5 * ihz;
    dzf(0, 1) = 2.0 * ihz;
    dzf(0, 2) = -0.5 * ihz;
    for (int j = 1; j < nz - 1; ++j) {
        dzf(j, j - 1) = -0.5 * ihz;
        dzf(j, j + 1) = 0.5 * ihz;
    }
    dzf(nz - 1, nz - 1) = 1.5 * ihz;
    dzf(nz - 1, nz - 2) = -2.0 * ihz;
    dzf(nz - 1, nz - 3) = 0.5 * ihz;

    Mat embed = Mat::Zero(nz, M);
    for (int j = 1; j <= M; ++j) embed(j, j - 1) = 1.0;
    const Mat dz_embed = dzf.cast<Cplx>() * embed;

    Eigen::VectorXcd wfull(nz);
    for (int j = 0; j < nz; ++j) wfull(j) = grid.wz(j) * hxy;

    im.lu.reserve(static_cast<size_t>(h.ny) * nkx);
    for (int iky = 0; iky < h.ny; ++iky)
        for (int ikx = 0; ikx < nkx; ++ikx) {
            const double kx = (h.nx % 2 == 0 && ikx == h.nx / 2) ? 0.0 : ikx;
            const double ky =
                (h.ny % 2 == 0 && iky == h.ny / 2) ? 0.0 : h.ky_signed(iky);
            const double ksq = mode_ksq(h, iky, ikx);
            const int nv = 3 * M, ntot = 4 * M;

            Mat gblk[3];
            gblk[0] = Cplx(0.0, kx) * embed;
            gblk[1] = Cplx(0.0, ky) * embed;
            gblk[2] = dz_embed;

            Mat k = Mat::Zero(nv, nv);
            for (int c = 0; c < 3; ++c) {
                for (int j = 1; j <= M; ++j)
                    k(c * M + j - 1, c * M + j - 1) += grid.wz(j) * hxy;
                double trace = hxy;
                if (damp_coef != 0.0 && ksq > 0.0)
                    trace += hxy * damp_coef * std::pow(ksq, damp_order);
                k(c * M + M - 1, c * M + M - 1) += trace;
            }
            if (visc_coef != 0.0) {
                for (int c = 0; c < 3; ++c)
                    for (int d = 0; d < 3; ++d) {
                        Mat e = Mat::Zero(nz, nv);
                        e.block(0, c * M, nz, M) += 0.5 * gblk[d];
                        e.block(0, d * M, nz, M) += 0.5 * gblk[c];
                        k += visc_coef * e.adjoint() * wfull.asDiagonal() * e;
                    }
            }

            Mat b = Mat::Zero(M, nv);
            for (int jh = 0; jh < M; ++jh) {
                for (int j : {jh, jh + 1})
                    if (j >= 1) {
                        b(jh, 0 * M + j - 1) += Cplx(0.0, 0.5 * hxy * kx);
                        b(jh, 1 * M + j - 1) += Cplx(0.0, 0.5 * hxy * ky);
                    }
                b(jh, 2 * M + jh) += hxy * ihz;  // level jh+1
                if (jh >= 1) b(jh, 2 * M + jh - 1) -= hxy * ihz;
            }

            Mat a = Mat::Zero(ntot, ntot);
            a.topLeftCorner(nv, nv) = k;
            a.topRightCorner(nv, M) = b.adjoint();
            a.bottomLeftCorner(M, nv) = b;
            im.lu.emplace_back(a);
            const auto diag = im.lu.back().matrixLU().diagonal().cwiseAbs().eval();
            if (diag.minCoeff() <= 1e-12 * diag.maxCoeff())
                throw std::logic_error(
                    "FluidPreconditioner: singular mode block (assembly bug)");
        }
}

void FluidPreconditioner::apply(const FluidDofMap& dof, const std::vector<double>& r,
                                std::vector<double>& z) const {
    const Impl& im = *impl_;
    if (dof.grid != im.grid)
        throw std::invalid_argument("FluidPreconditioner: grid mismatch");
    if (r.size() != dof.n_total)
        throw std::invalid_argument("FluidPreconditioner: bad vector size");
    z.assign(dof.n_total, 0.0);
    const Grid2d& h = im.grid.horiz;
    const int nkx = h.nkx(), M = im.levels;
    const size_t sp = static_cast<size_t>(h.ny) * nkx;

    std::vector<std::complex<double>> vspec(3 * static_cast<size_t>(M) * sp);
    std::vector<std::complex<double>> pspec(static_cast<size_t>(M) * sp);
    for (int c = 0; c < 3; ++c)
        for (int j = 1; j <= M; ++j)
            fft_forward_plane(h, r.data() + dof.vel(c, j, 0, 0),
                              vspec.data() + (static_cast<size_t>(c) * M + j - 1) * sp);
    for (int jh = 0; jh < M; ++jh)
        fft_forward_plane(h, r.data() + dof.pre(jh, 0, 0),
                          pspec.data() + static_cast<size_t>(jh) * sp);

    Eigen::VectorXcd bvec(4 * M), xvec(4 * M);
    for (int iky = 0; iky < h.ny; ++iky)
        for (int ikx = 0; ikx < nkx; ++ikx) {
            const size_t slot = static_cast<size_t>(iky) * nkx + ikx;
            for (int c = 0; c < 3; ++c)
                for (int j = 0; j < M; ++j)
                    bvec(c * M + j) = vspec[(static_cast<size_t>(c) * M + j) * sp + slot];
            for (int jh = 0; jh < M; ++jh)
                bvec(3 * M + jh) = pspec[static_cast<size_t>(jh) * sp + slot];
            xvec = im.lu[slot].solve(bvec);
            for (int c = 0; c < 3; ++c)
                for (int j = 0; j < M; ++j)
                    vspec[(static_cast<size_t>(c) * M + j) * sp + slot] = xvec(c * M + j);
            for (int jh = 0; jh < M; ++jh)
                pspec[static_cast<size_t>(jh) * sp + slot] = xvec(3 * M + jh);
        }

    for (int c = 0; c < 3; ++c)
        for (int j = 1; j <= M; ++j)
            fft_backward_plane(h,
                               vspec.data() + (static_cast<size_t>(c) * M + j - 1) * sp,
                               z.data() + dof.vel(c, j, 0, 0));
    for (int jh = 0; jh < M; ++jh)
        fft_backward_plane(h, pspec.data() + static_cast<size_t>(jh) * sp,
                           z.data() + dof.pre(jh, 0, 0));
}

FluidPreconditioner make_preconditioner(const Grid3d& grid, const FluidParams& params) {
    params.validate();
    return FluidPreconditioner(grid, 2.0 * params.nu * params.dt,
                               params.gamma * params.dt, 1.0 + params.s);
}

FluidStepResult advance_fluid(const SaddleSystem& sys, const FluidPreconditioner& pre) {
    const FluidDofMap& dof = sys.dof;
    std::vector<double> x;
    const LinearOp apply_a = [&sys](const std::vector<double>& in,
                                    std::vector<double>& out) {
        apply_saddle(sys, in, out);
    };
    const LinearOp apply_m = [&sys, &pre](const std::vector<double>& in,
                                          std::vector<double>& out) {
        pre.apply(sys.dof, in, out);
    };
    GmresResult g =
        gmres_solve(apply_a, apply_m, sys.rhs, x, sys.params.rel_tol, sys.params.max_iter);

    FluidStepResult r;
    r.u = ChannelField(dof.grid, 3);
    scatter_velocity(dof, x, r.u);
    r.v = trace_top(r.u);
    r.multiplier.assign(x.begin() + dof.n_vel, x.end());
    r.p = ChannelField(dof.grid, 1);
    const int np = dof.grid.horiz.size();
    const double idt = 1.0 / sys.params.dt;
    for (int j = 0; j < dof.grid.nz; ++j) {
        double* dst = r.p.plane(0, j);
        const double* lo =
            (j >= 1) ? r.multiplier.data() + static_cast<size_t>(j - 1) * np : nullptr;
        const double* hi = (j <= dof.grid.nz - 2)
                               ? r.multiplier.data() + static_cast<size_t>(j) * np
                               : nullptr;
        for (int i = 0; i < np; ++i) {
            double v = 0.0;
            int cnt = 0;
            if (lo != nullptr) { v += lo[i]; ++cnt; }
            if (hi != nullptr) { v += hi[i]; ++cnt; }
            dst[i] = idt * v / cnt;
        }
    }
    r.iterations = g.iterations;
    r.residual = g.relative_residual;
    r.converged = g.converged;
    r.history = std::move(g.history);
    return r;
}

FluidEnergy fluid_energy(const ChannelField& u, const AleMap& map, double nu) {
    if (u.grid != map.grid || u.ncomp != 3)
        throw std::invalid_argument("fluid_energy: field/map mismatch");
    FluidEnergy e;
    e.kinetic = 0.5 * volume_inner_weighted(map.jac, u, u);
    const ChannelField d = symmetric_part(transformed_gradient(map, u));
    e.dissipation_density = 2.0 * nu * volume_inner_weighted(map.jac, d, d);
    return e;
}

FluidIneqReport check_fluid_energy_inequality(double e_half, double e_next, double d_n,
                                              double jump_u, double jump_v, double tol) {
    FluidIneqReport r;
    r.lhs = e_next + d_n + jump_u + jump_v;
    r.rhs = e_half;
    r.slack = r.rhs - r.lhs;
    r.pass = r.lhs <= r.rhs + tol * std::max(1.0, std::abs(r.rhs));
    return r;
}

ProjectionResult project_divergence_free(const ChannelField& u0, const TorusField& v0,
                                         const AleMap& map0, double rel_tol,
                                         int max_iter) {
    const Grid3d& g = map0.grid;
    if (u0.grid != g || u0.ncomp != 3)
        throw std::invalid_argument("project_divergence_free: u0 shape mismatch");
    if (v0.grid != g.horiz || v0.ncomp != 3)
        throw std::invalid_argument("project_divergence_free: v0 shape mismatch");
    if (!map0.injective)
        throw std::runtime_error(
            "project_divergence_free: contact: map failed the injectivity gate");
    if (rel_tol <= 0.0 || max_iter < 1)
        throw std::invalid_argument("project_divergence_free: bad solver controls");

    SaddleSystem sys;
    sys.dof = FluidDofMap(g);
    sys.jac_n = map0.jac;
    sys.grad_inv = map0.grad_a_inv;
    sys.mass_weight = map0.jac;
    const size_t n = static_cast<size_t>(g.nodes());
    sys.piola = ChannelField(g, 9);
    for (int c = 0; c < 9; ++c)
        for (size_t i = 0; i < n; ++i)
            sys.piola.data[c * n + i] = map0.jac.data[i] * sys.grad_inv.data[c * n + i];
    sys.advect = ChannelField(g, 3);

    ChannelField full = u0;
    set_trace_top(full, v0);
    sys.rhs.assign(sys.dof.n_total, 0.0);
    ChannelField f = quad_scale(sys.jac_n, full, 1.0);
    zero_wall_rows(f);
    gather_momentum(sys.dof, f, sys.rhs);
    const double hxy = g.horiz.cell_area();
    const int top = g.nz - 1;
    for (int c = 0; c < 3; ++c)
        for (int iy = 0; iy < g.ny(); ++iy)
            for (int ix = 0; ix < g.nx(); ++ix)
                sys.rhs[sys.dof.vel(c, top, iy, ix)] += hxy * v0.at(c, iy, ix);

    const FluidPreconditioner pre(g, 0.0, 0.0, 1.0);
    std::vector<double> x;
    const LinearOp apply_a = [&sys](const std::vector<double>& in,
                                    std::vector<double>& out) {
        apply_saddle(sys, in, out);
    };
    const LinearOp apply_m = [&sys, &pre](const std::vector<double>& in,
                                          std::vector<double>& out) {
        pre.apply(sys.dof, in, out);
    };
    GmresResult gr = gmres_solve(apply_a, apply_m, sys.rhs, x, rel_tol, max_iter);

    ProjectionResult out;
    out.u = ChannelField(g, 3);
    scatter_velocity(sys.dof, x, out.u);
    out.v = trace_top(out.u);
    out.iterations = gr.iterations;
    out.residual = gr.relative_residual;
    out.converged = gr.converged;
    return out;
}

}  // namespace fsi
