#pragma once

#include <functional>
#include <vector>

namespace fsi {

using LinearOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct GmresResult {
    bool converged = false;
    int iterations = 0;
    double relative_residual = 0.0;  // true residual over ||b|| at exit
    std::vector<double> history;     // per-iteration residual estimates / ||b||
};

/// Right-preconditioned GMRES without restarts: builds the Krylov space of
/// A M^{-1}, so the minimized quantity is the true residual of A x = b.
/// Arnoldi uses modified Gram-Schmidt and the least-squares problem is kept
/// triangular with Givens rotations. The iteration targets a slightly
/// tighter estimate than rel_tol so the final measured residual (which is
/// what the convergence verdict uses) meets the requested tolerance.
/// x is overwritten; the initial guess is zero, and b = 0 returns x = 0 in
/// zero iterations.
GmresResult gmres_solve(const LinearOp& apply_a, const LinearOp& apply_m_inv,
                        const std::vector<double>& b, std::vector<double>& x,
                        double rel_tol, int max_iter);

}  // namespace fsi
