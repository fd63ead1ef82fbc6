#pragma once

#include "fsi/torus_field.hpp"

namespace fsi {

// Spectral calculus on the torus. Norm convention: with the mean-preserving
// transform normalization, ||f||_{L2(Gamma)}^2 = (2pi)^2 sum_k |fhat_k|^2,
// the sum running over the full integer lattice (stored half-spectrum
// entries are weighted by their conjugate multiplicity).

/// |k|^2 for a stored coefficient slot (kx from the half-spectrum column,
/// ky signed).
double mode_ksq(const Grid2d& g, int iky, int ikx);

/// 1 if the slot represents a single lattice mode, 2 if it stands for a
/// conjugate pair.
double mode_multiplicity(const Grid2d& g, int iky, int ikx);

/// Lambda^r f with Lambda = (-Laplace)^{1/2}, Fourier symbol |k|^r.
/// Zero mode: annihilated for r > 0, kept for r = 0. Requires r >= 0.
TorusField apply_fractional_laplacian(const TorusField& f, double r);

/// Full Sobolev norm (sum_k (1+|k|^2)^m |fhat|^2)^{1/2} in the L2(Gamma)
/// scaling above; components of a vector field are summed. m >= 0, may be
/// fractional.
double sobolev_norm(const TorusField& f, double m);

/// Homogeneous counterpart ||Lambda^r f||_{L2} = (sum_k |k|^{2r}|fhat|^2)^{1/2}
/// (same scaling). r = 2 gives ||Laplace f||, r = 3 gives the full third-
/// gradient contraction norm ||grad^3 f||.
double lambda_seminorm(const TorusField& f, double r);
double lambda_seminorm(const SpectralCoeffs& c, double r);

/// L2(Gamma) inner product and norm by grid quadrature (h_xy sum).
double l2_inner(const TorusField& f, const TorusField& g);
double l2_norm(const TorusField& f);

/// Spectral partial derivatives; Nyquist columns/rows are annihilated so the
/// operators are exactly antisymmetric on the grid.
TorusField deriv_x(const TorusField& f);
TorusField deriv_y(const TorusField& f);

/// L2-orthogonal projection onto the span of the num_modes real Fourier
/// modes of smallest |k|^2; ties broken lexicographically on (kx, ky) with
/// the cosine mode before the sine mode. num_modes in [1, nx*ny].
TorusField project_low_modes(const TorusField& f, int num_modes);

/// |k|^2 of the last retained mode of project_low_modes(., num_modes);
/// drives the spectral tail estimate ||f - P_M f|| <= lambda^{-1/2} ||f||_H1.
double projection_lambda(const Grid2d& g, int num_modes);

}  // namespace fsi
