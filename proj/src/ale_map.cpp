#include "fsi/ale_map.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "fsi/fft.hpp"
#include "fsi/torus_spectral.hpp"

namespace fsi {

namespace {

// Vertical profile of mode k and its z-derivative, evaluated in an
// overflow-safe form: sinh(|k| z)/sinh(|k|) = e^{|k|(z-1)} (1-e^{-2|k|z}) /
// (1-e^{-2|k|}). Zero mode extends linearly.
void mode_profile(double kappa, double z, double& phi, double& dphi) {
    if (kappa == 0.0) {
        phi = z;
        dphi = 1.0;
        return;
    }
    const double e1 = std::exp(kappa * (z - 1.0));
    const double q = std::exp(-2.0 * kappa * z);
    const double d = 1.0 - std::exp(-2.0 * kappa);
    phi = e1 * (1.0 - q) / d;
    dphi = kappa * e1 * (1.0 + q) / d;
}

void check_injective(const AleMap& map, const char* who) {
    if (!map.injective)
        throw std::runtime_error(std::string(who) + ": map is not injective");
}

void check_compatible(const AleMap& map, const ChannelField& g, int ncomp,
                      const char* who) {
    if (g.grid != map.grid || g.ncomp != ncomp)
        throw std::invalid_argument(std::string(who) + ": mismatched field shape");
}

}  // namespace

AleMap harmonic_extension(const TorusField& eta, int nz, double alpha) {
    if (eta.ncomp != 3)
        throw std::invalid_argument("harmonic_extension: eta must have 3 components");
    const Grid2d& h = eta.grid;
    Grid3d g(h.nx, h.ny, nz);

    AleMap map;
    map.grid = g;
    map.eta = eta;
    map.alpha = alpha;
    map.a = ChannelField(g, 3);
    map.grad_a = ChannelField(g, 9);
    map.grad_a_inv = ChannelField(g, 9);
    map.jac = ChannelField(g, 1);

    const SpectralCoeffs etahat = to_spectral(eta);
    const int nk = h.ny * h.nkx();
    std::vector<std::complex<double>> bhat(nk), dbhat(nk), work(nk);
    std::vector<double> bz(h.size()), dbz(h.size()), dbx(h.size()), dby(h.size());

    for (int c = 0; c < 3; ++c) {
        for (int j = 0; j < nz; ++j) {
            const double z = g.z(j);
            // Per-mode vertical profile, applied to the spectral data.
            for (int iky = 0; iky < h.ny; ++iky)
                for (int ikx = 0; ikx < h.nkx(); ++ikx) {
                    const int s = iky * h.nkx() + ikx;
                    const double kappa = std::sqrt(mode_ksq(h, iky, ikx));
                    double phi, dphi;
                    mode_profile(kappa, z, phi, dphi);
                    const auto e = etahat.at(c, iky, ikx);
                    bhat[s] = e * phi;
                    dbhat[s] = e * dphi;
                }
            fft_backward_plane(h, bhat.data(), bz.data());
            fft_backward_plane(h, dbhat.data(), dbz.data());
            // Horizontal derivatives of the extension (Nyquist annihilated,
            // matching the discrete derivative convention).
            for (int iky = 0; iky < h.ny; ++iky)
                for (int ikx = 0; ikx < h.nkx(); ++ikx) {
                    const int s = iky * h.nkx() + ikx;
                    const double kx =
                        (h.nx % 2 == 0 && ikx == h.nx / 2) ? 0.0 : ikx;
                    work[s] = bhat[s] * std::complex<double>(0.0, kx);
                }
            fft_backward_plane(h, work.data(), dbx.data());
            for (int iky = 0; iky < h.ny; ++iky)
                for (int ikx = 0; ikx < h.nkx(); ++ikx) {
                    const int s = iky * h.nkx() + ikx;
                    const double ky =
                        (h.ny % 2 == 0 && iky == h.ny / 2) ? 0.0 : h.ky_signed(iky);
                    work[s] = bhat[s] * std::complex<double>(0.0, ky);
                }
            fft_backward_plane(h, work.data(), dby.data());

            double* pa = map.a.plane(c, j);
            double* gx = map.grad_a.plane(3 * c + 0, j);
            double* gy = map.grad_a.plane(3 * c + 1, j);
            double* gz = map.grad_a.plane(3 * c + 2, j);
            for (int iy = 0; iy < h.ny; ++iy)
                for (int ix = 0; ix < h.nx; ++ix) {
                    const int s = iy * h.nx + ix;
                    const double id_c = (c == 0) ? h.x(ix) : (c == 1) ? h.y(iy) : z;
                    pa[s] = id_c + bz[s];
                    gx[s] = (c == 0 ? 1.0 : 0.0) + dbx[s];
                    gy[s] = (c == 1 ? 1.0 : 0.0) + dby[s];
                    gz[s] = (c == 2 ? 1.0 : 0.0) + dbz[s];
                }
        }
    }

    // Determinant and adjugate inverse, nodewise.
    const size_t n = static_cast<size_t>(g.nodes());
    const double* t[9];
    for (int c = 0; c < 9; ++c) t[c] = map.grad_a.data.data() + c * n;
    double* inv[9];
    for (int c = 0; c < 9; ++c) inv[c] = map.grad_a_inv.data.data() + c * n;
    double* jd = map.jac.data.data();
    double minj = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        const double a00 = t[0][i], a01 = t[1][i], a02 = t[2][i];
        const double a10 = t[3][i], a11 = t[4][i], a12 = t[5][i];
        const double a20 = t[6][i], a21 = t[7][i], a22 = t[8][i];
        const double c00 = a11 * a22 - a12 * a21;
        const double c01 = a02 * a21 - a01 * a22;
        const double c02 = a01 * a12 - a02 * a11;
        const double c10 = a12 * a20 - a10 * a22;
        const double c11 = a00 * a22 - a02 * a20;
        const double c12 = a02 * a10 - a00 * a12;
        const double c20 = a10 * a21 - a11 * a20;
        const double c21 = a01 * a20 - a00 * a21;
        const double c22 = a00 * a11 - a01 * a10;
        const double det = a00 * c00 + a01 * c10 + a02 * c20;
        jd[i] = det;
        minj = std::min(minj, det);
        const double idet = (det != 0.0) ? 1.0 / det : 0.0;
        inv[0][i] = c00 * idet;
        inv[1][i] = c01 * idet;
        inv[2][i] = c02 * idet;
        inv[3][i] = c10 * idet;
        inv[4][i] = c11 * idet;
        inv[5][i] = c12 * idet;
        inv[6][i] = c20 * idet;
        inv[7][i] = c21 * idet;
        inv[8][i] = c22 * idet;
    }
    map.min_jacobian = minj;
    map.injective = minj > alpha;
    return map;
}

InjectivityReport injectivity_check(const AleMap& map, double alpha, double delta) {
    InjectivityReport r;
    r.min_jacobian = map.min_jacobian;
    r.eta_h2delta = sobolev_norm(map.eta, 2.0 + delta);
    r.pass = map.min_jacobian > alpha;
    return r;
}

ChannelField piola_transform(const AleMap& map, const ChannelField& g) {
    check_injective(map, "piola_transform");
    check_compatible(map, g, 3, "piola_transform");
    ChannelField out(map.grid, 3);
    const size_t n = static_cast<size_t>(map.grid.nodes());
    for (int c = 0; c < 3; ++c) {
        double* dst = out.data.data() + c * n;
        const double* jd = map.jac.data.data();
        for (int d = 0; d < 3; ++d) {
            const double* m = map.grad_a_inv.data.data() + (static_cast<size_t>(3 * c + d)) * n;
            const double* src = g.data.data() + d * n;
            if (d == 0)
                for (size_t i = 0; i < n; ++i) dst[i] = jd[i] * m[i] * src[i];
            else
                for (size_t i = 0; i < n; ++i) dst[i] += jd[i] * m[i] * src[i];
        }
    }
    return out;
}

ChannelField transformed_gradient(const AleMap& map, const ChannelField& g) {
    check_injective(map, "transformed_gradient");
    check_compatible(map, g, 3, "transformed_gradient");
    const ChannelField grad = channel_gradient(g);
    ChannelField out(map.grid, 9);
    const size_t n = static_cast<size_t>(map.grid.nodes());
    for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
            double* dst = out.data.data() + (static_cast<size_t>(3 * c + d)) * n;
            for (int e = 0; e < 3; ++e) {
                const double* dg = grad.data.data() + (static_cast<size_t>(3 * c + e)) * n;
                const double* m =
                    map.grad_a_inv.data.data() + (static_cast<size_t>(3 * e + d)) * n;
                if (e == 0)
                    for (size_t i = 0; i < n; ++i) dst[i] = dg[i] * m[i];
                else
                    for (size_t i = 0; i < n; ++i) dst[i] += dg[i] * m[i];
            }
        }
    return out;
}

ChannelField ale_velocity(const AleMap& prev, const AleMap& next, double dt) {
    if (prev.grid != next.grid)
        throw std::invalid_argument("ale_velocity: mismatched grids");
    if (dt <= 0.0) throw std::invalid_argument("ale_velocity: dt must be positive");
    ChannelField w(prev.grid, 3);
    const double idt = 1.0 / dt;
    for (size_t i = 0; i < w.data.size(); ++i)
        w.data[i] = idt * (next.a.data[i] - prev.a.data[i]);
    return w;
}

ChannelField jacobian_time_difference(const AleMap& prev, const AleMap& next, double dt) {
    if (prev.grid != next.grid)
        throw std::invalid_argument("jacobian_time_difference: mismatched grids");
    if (dt <= 0.0)
        throw std::invalid_argument("jacobian_time_difference: dt must be positive");
    ChannelField out(prev.grid, 1);
    const double idt = 1.0 / dt;
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = idt * (next.jac.data[i] - prev.jac.data[i]);
    return out;
}

}  // namespace fsi
