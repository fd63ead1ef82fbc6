#pragma once

#include <vector>

#include "fsi/grid.hpp"
#include "fsi/torus_field.hpp"

namespace fsi {

/// Real field on the reference channel, ncomp in {1,3,9}
/// (scalar / vector / tensor, tensor row-major: comp 3c+d = T_{cd}).
/// Layout [c][j][iy][ix] with horizontal planes contiguous.
struct ChannelField {
    Grid3d grid;
    int ncomp = 1;
    std::vector<double> data;

    ChannelField() = default;
    ChannelField(const Grid3d& g, int nc) : grid(g), ncomp(nc) {
        if (nc != 1 && nc != 3 && nc != 9)
            throw std::invalid_argument("ChannelField: ncomp must be 1, 3 or 9");
        data.assign(static_cast<size_t>(nc) * g.nodes(), 0.0);
    }

    size_t idx(int c, int j, int iy, int ix) const {
        return ((static_cast<size_t>(c) * grid.nz + j) * grid.ny() + iy) * grid.nx() + ix;
    }
    double& at(int c, int j, int iy, int ix) { return data[idx(c, j, iy, ix)]; }
    double at(int c, int j, int iy, int ix) const { return data[idx(c, j, iy, ix)]; }

    const double* plane(int c, int j) const {
        return data.data() + (static_cast<size_t>(c) * grid.nz + j) * grid.horiz.size();
    }
    double* plane(int c, int j) {
        return data.data() + (static_cast<size_t>(c) * grid.nz + j) * grid.horiz.size();
    }
};

/// Restriction to the interface plane z = 1 (node j = nz-1).
TorusField trace_top(const ChannelField& f);

/// Write a torus field into the z = 1 plane of a channel field.
void set_trace_top(ChannelField& f, const TorusField& v);

/// Spectral horizontal derivatives (per z-plane, Nyquist annihilated) and
/// second-order finite-difference vertical derivative (central inside,
/// one-sided at z = 0, 1). Defined for any ncomp, componentwise.
ChannelField deriv_x(const ChannelField& f);
ChannelField deriv_y(const ChannelField& f);
ChannelField deriv_z(const ChannelField& f);

/// Exact matrix transposes of the discrete derivative operators (the
/// horizontal ones are skew up to the annihilated Nyquist rows, so the
/// transpose is the negation; the vertical transpose redistributes the
/// one-sided end rows). Needed for adjoint-exact assembly.
ChannelField deriv_x_transpose(const ChannelField& f);
ChannelField deriv_y_transpose(const ChannelField& f);
ChannelField deriv_z_transpose(const ChannelField& f);

/// Spectral derivative of a single horizontal plane (layout [iy][ix]); the
/// transpose flag negates the symbol. Used for fields that do not live on
/// the full-level grid (e.g. the staggered pressure planes).
void plane_deriv_x(const Grid2d& g, const double* in, double* out, bool transpose = false);
void plane_deriv_y(const Grid2d& g, const double* in, double* out, bool transpose = false);

/// Gradient of a vector field: (grad g)_{cd} = d g_c / d x_d, 3 -> 9.
ChannelField channel_gradient(const ChannelField& g);

/// Symmetric part of a tensor field, 9 -> 9.
ChannelField symmetric_part(const ChannelField& tensor);

/// Quadrature inner product over the channel: exact in (x,y), trapezoid in z.
/// The weighted variant inserts a scalar nodewise factor (e.g. a Jacobian).
double volume_inner(const ChannelField& a, const ChannelField& b);
double volume_inner_weighted(const ChannelField& w, const ChannelField& a,
                             const ChannelField& b);

}  // namespace fsi
