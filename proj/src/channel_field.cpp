#include "fsi/channel_field.hpp"

#include <cmath>
#include <complex>

#include "fsi/fft.hpp"

namespace fsi {

TorusField trace_top(const ChannelField& f) {
    if (f.ncomp != 3 && f.ncomp != 1)
        throw std::invalid_argument("trace_top: expects scalar or vector field");
    TorusField out(f.grid.horiz, f.ncomp);
    const int j = f.grid.nz - 1;
    for (int c = 0; c < f.ncomp; ++c) {
        const double* src = f.plane(c, j);
        double* dst = out.plane(c);
        for (int i = 0; i < f.grid.horiz.size(); ++i) dst[i] = src[i];
    }
    return out;
}

void set_trace_top(ChannelField& f, const TorusField& v) {
    if (f.grid.horiz != v.grid || f.ncomp != v.ncomp)
        throw std::invalid_argument("set_trace_top: mismatched field shapes");
    const int j = f.grid.nz - 1;
    for (int c = 0; c < f.ncomp; ++c) {
        const double* src = v.plane(c);
        double* dst = f.plane(c, j);
        for (int i = 0; i < f.grid.horiz.size(); ++i) dst[i] = src[i];
    }
}

namespace {

enum class Dir { X, Y };

void spectral_deriv_plane(const Grid2d& g, const double* in, double* out, Dir dir,
                          bool transpose) {
    static thread_local std::vector<std::complex<double>> spec;
    spec.resize(static_cast<size_t>(g.ny) * g.nkx());
    fft_forward_plane(g, in, spec.data());
    for (int iky = 0; iky < g.ny; ++iky)
        for (int ikx = 0; ikx < g.nkx(); ++ikx) {
            double k;
            if (dir == Dir::X)
                k = (g.nx % 2 == 0 && ikx == g.nx / 2) ? 0.0 : ikx;
            else
                k = (g.ny % 2 == 0 && iky == g.ny / 2) ? 0.0 : g.ky_signed(iky);
            if (transpose) k = -k;  // skew operator: transpose = negation
            spec[static_cast<size_t>(iky) * g.nkx() + ikx] *= std::complex<double>(0.0, k);
        }
    fft_backward_plane(g, spec.data(), out);
}

ChannelField horizontal_deriv(const ChannelField& f, Dir dir, bool transpose) {
    ChannelField out(f.grid, f.ncomp);
    for (int c = 0; c < f.ncomp; ++c)
        for (int j = 0; j < f.grid.nz; ++j)
            spectral_deriv_plane(f.grid.horiz, f.plane(c, j), out.plane(c, j), dir,
                                 transpose);
    return out;
}

}  // namespace

void plane_deriv_x(const Grid2d& g, const double* in, double* out, bool transpose) {
    spectral_deriv_plane(g, in, out, Dir::X, transpose);
}

void plane_deriv_y(const Grid2d& g, const double* in, double* out, bool transpose) {
    spectral_deriv_plane(g, in, out, Dir::Y, transpose);
}

ChannelField deriv_x(const ChannelField& f) { return horizontal_deriv(f, Dir::X, false); }
ChannelField deriv_y(const ChannelField& f) { return horizontal_deriv(f, Dir::Y, false); }
ChannelField deriv_x_transpose(const ChannelField& f) {
    return horizontal_deriv(f, Dir::X, true);
}
ChannelField deriv_y_transpose(const ChannelField& f) {
    return horizontal_deriv(f, Dir::Y, true);
}

ChannelField deriv_z(const ChannelField& f) {
    const Grid3d& g = f.grid;
    const int nz = g.nz, np = g.horiz.size();
    const double ih = 1.0 / g.hz();
    ChannelField out(g, f.ncomp);
    for (int c = 0; c < f.ncomp; ++c) {
        for (int i = 0; i < np; ++i) {
            auto v = [&](int j) { return f.plane(c, j)[i]; };
            out.plane(c, 0)[i] = ih * (-1.5 * v(0) + 2.0 * v(1) - 0.5 * v(2));
            for (int j = 1; j < nz - 1; ++j)
                out.plane(c, j)[i] = 0.5 * ih * (v(j + 1) - v(j - 1));
            out.plane(c, nz - 1)[i] =
                ih * (1.5 * v(nz - 1) - 2.0 * v(nz - 2) + 0.5 * v(nz - 3));
        }
    }
    return out;
}

ChannelField deriv_z_transpose(const ChannelField& f) {
    const Grid3d& g = f.grid;
    const int nz = g.nz, np = g.horiz.size();
    const double ih = 1.0 / g.hz();
    ChannelField out(g, f.ncomp);
    for (int c = 0; c < f.ncomp; ++c) {
        for (int i = 0; i < np; ++i) {
            auto v = [&](int j) { return f.plane(c, j)[i]; };
            // Column j of D_z gathers the row entries that touch node j.
            for (int j = 0; j < nz; ++j) {
                double acc = 0.0;
                if (j == 0) acc += -1.5 * ih * v(0);
                if (j == 1) acc += 2.0 * ih * v(0);
                if (j == 2) acc += -0.5 * ih * v(0);
                if (j == nz - 1) acc += 1.5 * ih * v(nz - 1);
                if (j == nz - 2) acc += -2.0 * ih * v(nz - 1);
                if (j == nz - 3) acc += 0.5 * ih * v(nz - 1);
                if (j - 1 >= 1 && j - 1 <= nz - 2) acc += 0.5 * ih * v(j - 1);
                if (j + 1 >= 1 && j + 1 <= nz - 2) acc += -0.5 * ih * v(j + 1);
                out.plane(c, j)[i] = acc;
            }
        }
    }
    return out;
}

ChannelField channel_gradient(const ChannelField& g) {
    if (g.ncomp != 3)
        throw std::invalid_argument("channel_gradient: expects a vector field");
    ChannelField out(g.grid, 9);
    const ChannelField dx = deriv_x(g), dy = deriv_y(g), dz = deriv_z(g);
    const size_t n = static_cast<size_t>(g.grid.nodes());
    for (int c = 0; c < 3; ++c) {
        const double* s[3] = {dx.data.data() + c * n, dy.data.data() + c * n,
                              dz.data.data() + c * n};
        for (int d = 0; d < 3; ++d) {
            double* dst = out.data.data() + (static_cast<size_t>(3 * c + d)) * n;
            for (size_t i = 0; i < n; ++i) dst[i] = s[d][i];
        }
    }
    return out;
}

ChannelField symmetric_part(const ChannelField& t) {
    if (t.ncomp != 9)
        throw std::invalid_argument("symmetric_part: expects a tensor field");
    ChannelField out(t.grid, 9);
    const size_t n = static_cast<size_t>(t.grid.nodes());
    for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
            const double* a = t.data.data() + (static_cast<size_t>(3 * c + d)) * n;
            const double* b = t.data.data() + (static_cast<size_t>(3 * d + c)) * n;
            double* dst = out.data.data() + (static_cast<size_t>(3 * c + d)) * n;
            for (size_t i = 0; i < n; ++i) dst[i] = 0.5 * (a[i] + b[i]);
        }
    return out;
}

double volume_inner(const ChannelField& a, const ChannelField& b) {
    if (a.grid != b.grid || a.ncomp != b.ncomp)
        throw std::invalid_argument("volume_inner: mismatched fields");
    const Grid3d& g = a.grid;
    const int np = g.horiz.size();
    double acc = 0.0;
    for (int c = 0; c < a.ncomp; ++c)
        for (int j = 0; j < g.nz; ++j) {
            const double* pa = a.plane(c, j);
            const double* pb = b.plane(c, j);
            double s = 0.0;
            for (int i = 0; i < np; ++i) s += pa[i] * pb[i];
            acc += g.wz(j) * s;
        }
    return acc * g.horiz.cell_area();
}

double volume_inner_weighted(const ChannelField& w, const ChannelField& a,
                             const ChannelField& b) {
    if (a.grid != b.grid || a.ncomp != b.ncomp || w.grid != a.grid || w.ncomp != 1)
        throw std::invalid_argument("volume_inner_weighted: mismatched fields");
    const Grid3d& g = a.grid;
    const int np = g.horiz.size();
    double acc = 0.0;
    for (int c = 0; c < a.ncomp; ++c)
        for (int j = 0; j < g.nz; ++j) {
            const double* pa = a.plane(c, j);
            const double* pb = b.plane(c, j);
            const double* pw = w.plane(0, j);
            double s = 0.0;
            for (int i = 0; i < np; ++i) s += pw[i] * pa[i] * pb[i];
            acc += g.wz(j) * s;
        }
    return acc * g.horiz.cell_area();
}

}  // namespace fsi
