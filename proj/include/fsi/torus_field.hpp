#pragma once

#include <complex>
#include <vector>

#include "fsi/grid.hpp"

namespace fsi {

/// Real-valued field on the 2-torus with ncomp components
/// (1 = scalar, 3 = displacement/velocity vector). Layout [c][iy][ix].
struct TorusField {
    Grid2d grid;
    int ncomp = 1;
    std::vector<double> data;

    TorusField() = default;
    TorusField(const Grid2d& g, int nc) : grid(g), ncomp(nc) {
        if (nc != 1 && nc != 3)
            throw std::invalid_argument("TorusField: ncomp must be 1 or 3");
        data.assign(static_cast<size_t>(nc) * g.size(), 0.0);
    }

    double& at(int c, int iy, int ix) {
        return data[(static_cast<size_t>(c) * grid.ny + iy) * grid.nx + ix];
    }
    double at(int c, int iy, int ix) const {
        return data[(static_cast<size_t>(c) * grid.ny + iy) * grid.nx + ix];
    }
    const double* plane(int c) const { return data.data() + static_cast<size_t>(c) * grid.size(); }
    double* plane(int c) { return data.data() + static_cast<size_t>(c) * grid.size(); }
};

/// Half-spectrum coefficients of a real torus field (conjugate symmetry
/// implicit): layout [c][iky][ikx], ikx = 0..nx/2, zero mode = plane mean.
struct SpectralCoeffs {
    Grid2d grid;
    int ncomp = 1;
    std::vector<std::complex<double>> data;

    SpectralCoeffs() = default;
    SpectralCoeffs(const Grid2d& g, int nc) : grid(g), ncomp(nc) {
        if (nc != 1 && nc != 3)
            throw std::invalid_argument("SpectralCoeffs: ncomp must be 1 or 3");
        data.assign(static_cast<size_t>(nc) * g.ny * g.nkx(), {0.0, 0.0});
    }

    std::complex<double>& at(int c, int iky, int ikx) {
        return data[(static_cast<size_t>(c) * grid.ny + iky) * grid.nkx() + ikx];
    }
    std::complex<double> at(int c, int iky, int ikx) const {
        return data[(static_cast<size_t>(c) * grid.ny + iky) * grid.nkx() + ikx];
    }
    const std::complex<double>* plane(int c) const {
        return data.data() + static_cast<size_t>(c) * grid.ny * grid.nkx();
    }
    std::complex<double>* plane(int c) {
        return data.data() + static_cast<size_t>(c) * grid.ny * grid.nkx();
    }
};

SpectralCoeffs to_spectral(const TorusField& f);
TorusField to_physical(const SpectralCoeffs& c);

/// Re-impose the r2c redundancy constraints (kx = 0 and kx = nx/2 columns
/// must be self-conjugate under ky -> -ky) after direct coefficient edits.
void enforce_conjugate_symmetry(SpectralCoeffs& c);

/// Max violation of the redundancy constraints (diagnostic).
double conjugate_symmetry_defect(const SpectralCoeffs& c);

}  // namespace fsi
