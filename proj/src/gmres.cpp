#include "fsi/gmres.hpp"

#include <cmath>
#include <stdexcept>

namespace fsi {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

GmresResult gmres_solve(const LinearOp& apply_a, const LinearOp& apply_m_inv,
                        const std::vector<double>& b, std::vector<double>& x,
                        double rel_tol, int max_iter) {
    if (rel_tol <= 0.0 || max_iter < 1)
        throw std::invalid_argument("gmres_solve: need rel_tol > 0 and max_iter >= 1");
    const size_t n = b.size();
    GmresResult res;
    x.assign(n, 0.0);
    const double bnorm = nrm2(b);
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    const double target = 0.9 * rel_tol * bnorm;

    std::vector<std::vector<double>> basis;  // orthonormal basis of K(A M^{-1}, b)
    basis.push_back(b);
    for (double& e : basis[0]) e /= bnorm;
    std::vector<std::vector<double>> hcols;  // rotated Hessenberg columns
    std::vector<double> cs, sn, g{bnorm};
    std::vector<double> z(n), w(n);

    int k = 0;
    while (k < max_iter) {
        apply_m_inv(basis[k], z);
        apply_a(z, w);
        std::vector<double> h(k + 2, 0.0);
        for (int i = 0; i <= k; ++i) {
            h[i] = dot(w, basis[i]);
            const std::vector<double>& vi = basis[i];
            for (size_t q = 0; q < n; ++q) w[q] -= h[i] * vi[q];
        }
        const double hsub = nrm2(w);
        h[k + 1] = hsub;
        for (int i = 0; i < k; ++i) {
            const double t = cs[i] * h[i] + sn[i] * h[i + 1];
            h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
            h[i] = t;
        }
        const double r = std::hypot(h[k], h[k + 1]);
        if (r == 0.0) break;  // stagnation: the new direction adds nothing
        cs.push_back(h[k] / r);
        sn.push_back(h[k + 1] / r);
        h[k] = r;
        h[k + 1] = 0.0;
        g.push_back(-sn[k] * g[k]);
        g[k] *= cs[k];
        hcols.push_back(std::move(h));
        ++k;
        const double est = std::abs(g[k]);
        res.history.push_back(est / bnorm);
        if (est <= target || hsub == 0.0) break;
        basis.push_back(w);
        for (double& e : basis[k]) e /= hsub;
    }

    // y solves the triangular system R y = g, then x = M^{-1} (V y).
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
        double s = g[i];
        for (int j = i + 1; j < k; ++j) s -= hcols[j][i] * y[j];
        y[i] = s / hcols[i][i];
    }
    std::vector<double> vy(n, 0.0);
    for (int j = 0; j < k; ++j) {
        const std::vector<double>& vj = basis[j];
        for (size_t q = 0; q < n; ++q) vy[q] += y[j] * vj[q];
    }
    apply_m_inv(vy, x);

    apply_a(x, w);
    double rr = 0.0;
    for (size_t q = 0; q < n; ++q) {
        const double d = b[q] - w[q];
        rr += d * d;
    }
    res.relative_residual = std::sqrt(rr) / bnorm;
    res.iterations = k;
    res.converged = res.relative_residual <= rel_tol;
    return res;
}

}  // namespace fsi
