#pragma once

#include <complex>

#include "fsi/grid.hpp"

namespace fsi {

// Thin cached wrapper around FFTW's 2D r2c/c2r transforms.
//
// Convention: the forward transform carries the 1/(nx*ny) factor, so the
// zero mode equals the plane mean and f(x) = sum_k fhat_k e^{i k.x} with no
// factor on the inverse. Plans are created once per grid size with
// FFTW_ESTIMATE (deterministic across runs) and reused; creation and
// execution go through a mutex so concurrent read-only callers are safe.

/// Forward 2D transform of one real plane (layout [iy][ix], x fastest)
/// into the half-spectrum layout [iky][ikx], ikx = 0..nx/2.
void fft_forward_plane(const Grid2d& g, const double* real_in,
                       std::complex<double>* spec_out);

/// Inverse of fft_forward_plane. Input is copied; caller's buffer is kept.
void fft_backward_plane(const Grid2d& g, const std::complex<double>* spec_in,
                        double* real_out);

}  // namespace fsi
