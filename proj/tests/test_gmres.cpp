#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsi/gmres.hpp"
#include "fsi/rng.hpp"

using namespace fsi;

namespace {

LinearOp matrix_op(const Eigen::MatrixXd& m) {
    return [m](const std::vector<double>& in, std::vector<double>& out) {
        Eigen::Map<const Eigen::VectorXd> x(in.data(), static_cast<long>(in.size()));
        const Eigen::VectorXd y = m * x;
        out.assign(y.data(), y.data() + y.size());
    };
}

LinearOp identity_op() {
    return [](const std::vector<double>& in, std::vector<double>& out) { out = in; };
}

Eigen::MatrixXd random_invertible(int n, uint64_t seed) {
    Eigen::MatrixXd a(n, n);
    uint64_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = rng_sym(seed, idx++) + (i == j ? 6.0 : 0.0);
    return a;
}

}  // namespace

TEST_CASE("gmres matches a dense direct solve") {
    const int n = 40;
    const Eigen::MatrixXd a = random_invertible(n, 7);
    Eigen::VectorXd bb(n);
    for (int i = 0; i < n; ++i) bb(i) = rng_sym(8, static_cast<uint64_t>(i));
    std::vector<double> b(bb.data(), bb.data() + n), x;

    const GmresResult res = gmres_solve(matrix_op(a), identity_op(), b, x, 1e-12, 200);
    CHECK(res.converged);
    CHECK(res.relative_residual <= 1e-12);
    CHECK(res.history.size() == static_cast<size_t>(res.iterations));

    const Eigen::VectorXd direct = a.partialPivLu().solve(bb);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(x[i] - direct(i)));
    CHECK(worst < 1e-9);
}

TEST_CASE("gmres with the exact inverse as preconditioner needs one iteration") {
    const int n = 30;
    const Eigen::MatrixXd a = random_invertible(n, 9);
    const Eigen::MatrixXd ainv = a.inverse();
    std::vector<double> b(n), x;
    for (int i = 0; i < n; ++i) b[i] = rng_sym(10, static_cast<uint64_t>(i));

    const GmresResult res = gmres_solve(matrix_op(a), matrix_op(ainv), b, x, 1e-10, 50);
    CHECK(res.converged);
    CHECK(res.iterations == 1);
}

TEST_CASE("gmres zero right-hand side and argument validation") {
    std::vector<double> b(5, 0.0), x(5, 3.0);
    const GmresResult res = gmres_solve(identity_op(), identity_op(), b, x, 1e-10, 10);
    CHECK(res.converged);
    CHECK(res.iterations == 0);
    for (double v : x) CHECK(v == 0.0);

    std::vector<double> b2(5, 1.0);
    CHECK_THROWS_AS(gmres_solve(identity_op(), identity_op(), b2, x, 0.0, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(gmres_solve(identity_op(), identity_op(), b2, x, 1e-10, 0),
                    std::invalid_argument);
}

TEST_CASE("gmres reports non-convergence honestly") {
    // Cyclic shift: the residual cannot drop below 1 until the full dimension
    // is reached, so a small iteration cap must come back unconverged.
    const int n = 50;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) a((i + 1) % n, i) = 1.0;
    std::vector<double> b(n, 0.0), x;
    b[0] = 1.0;

    const GmresResult res = gmres_solve(matrix_op(a), identity_op(), b, x, 1e-12, 5);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 5);
    CHECK(res.relative_residual > 0.5);

    // With enough room the same system is solved exactly.
    const GmresResult full = gmres_solve(matrix_op(a), identity_op(), b, x, 1e-12, n + 1);
    CHECK(full.converged);
}
