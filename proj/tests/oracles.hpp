#ifndef NONLOCAL_TEST_ORACLES_HPP
#define NONLOCAL_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace oracle {

// -max Re(spectrum) from a full dense eigendecomposition.
inline double dense_lambda(const Eigen::MatrixXd& A) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(A, false);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& z : solver.eigenvalues())
        best = std::max(best, z.real());
    return -best;
}

// F(lambda) = (2/sqrt t) atan(1/sqrt t), t = -lambda - 1: a_bar = 1 - x^2, c0 = 1 on (-1, 1).
inline double closed_form_F(double lambda) {
    const double t = -lambda - 1.0;
    return 2.0 / std::sqrt(t) * std::atan(1.0 / std::sqrt(t));
}

inline double closed_form_root() {
    double lo = -10.0;
    double hi = -1.0 - 1e-12;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (closed_form_F(mid) > 1.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace oracle

#endif
