#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fsi {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Uniform periodic grid on the flat torus [0,2pi)^2.
/// x_i = 2*pi*i/nx, y_j = 2*pi*j/ny; integer wavevectors.
struct Grid2d {
    int nx = 0;
    int ny = 0;

    Grid2d() = default;
    Grid2d(int nx_, int ny_) : nx(nx_), ny(ny_) {
        if (nx < 4 || ny < 4)
            throw std::invalid_argument("Grid2d: need nx, ny >= 4");
    }

    bool operator==(const Grid2d& o) const { return nx == o.nx && ny == o.ny; }
    bool operator!=(const Grid2d& o) const { return !(*this == o); }

    int size() const { return nx * ny; }
    double hx() const { return kTwoPi / nx; }
    double hy() const { return kTwoPi / ny; }
    double cell_area() const { return hx() * hy(); }     // h_xy
    double x(int i) const { return hx() * i; }
    double y(int j) const { return hy() * j; }

    // Half-spectrum extent along x (r2c layout: kx = 0..nx/2).
    int nkx() const { return nx / 2 + 1; }

    // Signed wavenumber for a stored row index along y.
    int ky_signed(int iky) const { return (iky <= ny / 2) ? iky : iky - ny; }
};

/// Reference channel O = [0,2pi)^2 x (0,1). Horizontal grid periodic,
/// vertical nodes z_j = j/(nz-1), j = 0..nz-1; z=0 rigid wall, z=1 interface.
struct Grid3d {
    Grid2d horiz;
    int nz = 0;

    Grid3d() = default;
    Grid3d(int nx_, int ny_, int nz_) : horiz(nx_, ny_), nz(nz_) {
        if (nz < 5)
            throw std::invalid_argument("Grid3d: need nz >= 5");
    }

    bool operator==(const Grid3d& o) const { return horiz == o.horiz && nz == o.nz; }
    bool operator!=(const Grid3d& o) const { return !(*this == o); }

    int nx() const { return horiz.nx; }
    int ny() const { return horiz.ny; }
    double hz() const { return 1.0 / (nz - 1); }
    double z(int j) const { return hz() * j; }

    // Trapezoid weight in z (end nodes carry hz/2).
    double wz(int j) const {
        return (j == 0 || j == nz - 1) ? 0.5 * hz() : hz();
    }

    int nodes() const { return horiz.size() * nz; }
};

}  // namespace fsi
