#ifndef NONLOCAL_OPERATOR_HPP
#define NONLOCAL_OPERATOR_HPP

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "nonlocal/grid.hpp"
#include "nonlocal/profiles.hpp"

namespace nonlocal {

struct AssemblyOptions {
    // Scale each column to the continuum column mass. Unset: on for a torus,
    // off for a bounded domain.
    std::optional<bool> renormalize;
    // Allow nodes with g < g_floor; their columns become zero.
    bool exclude_degenerate = false;
    double g_floor = 1e-8;
};

/// Discretized operator A = K + diag(a).
///
/// K[i][j] = J((x_i - x_j)/g_j) w_j / g_j^n, so (K u)_i approximates the
/// integral part at x_i. Columns of excluded (degenerate) nodes are zero.
class NonlocalOperator {
public:
    NonlocalOperator(Grid grid, Eigen::MatrixXd K, Eigen::VectorXd a, Eigen::VectorXd dmu,
                     Eigen::VectorXd column_mass, std::vector<bool> excluded);

    const Grid& grid() const noexcept { return grid_; }
    Eigen::Index size() const noexcept { return K_.rows(); }
    const Eigen::MatrixXd& integral_part() const noexcept { return K_; }
    const Eigen::VectorXd& diagonal() const noexcept { return a_; }
    const Eigen::VectorXd& measure() const noexcept { return dmu_; }
    // c(x_j): mass of column j against dx; 1 at excluded nodes.
    const Eigen::VectorXd& column_mass() const noexcept { return c_; }
    const std::vector<bool>& excluded() const noexcept { return excluded_; }
    bool is_excluded(Eigen::Index i) const { return excluded_[static_cast<std::size_t>(i)]; }

    Eigen::MatrixXd matrix() const;
    Eigen::VectorXd apply(const Eigen::VectorXd& u) const;

    // Same kernel, new zero-order coefficient.
    NonlocalOperator with_diagonal(Eigen::VectorXd a) const;

private:
    Grid grid_;
    Eigen::MatrixXd K_;
    Eigen::VectorXd a_;
    Eigen::VectorXd dmu_;
    Eigen::VectorXd c_;
    std::vector<bool> excluded_;
};

// J((x - y)/g(y)) / g(y)^n with the minimal-image displacement on a torus.
double eval_kernel(const KernelJ& J, const DispersalG& g, const Domain& domain, const Point& x, const Point& y);

NonlocalOperator assemble(const Grid& grid, const KernelJ& J, const DispersalG& g, const CoefficientA& a,
                          const AssemblyOptions& options = {});

struct FloorConstants {
    double c0;    // J(0)/2
    double delta; // J >= c0 on the ball of radius delta
    double r;     // delta * alpha / 2
};

FloorConstants kernel_floor_constants(const KernelJ& J, const DispersalG& g);

// Continuum c(x) = int_Omega J((y - x)/g(x)) dy / g(x)^n; 1 where g(x) = 0.
double continuum_column_mass(const Domain& domain, const KernelJ& J, const DispersalG& g, const Point& x,
                             double g_floor = 1e-8);

// Per-node c(x_i): the continuum value when renormalizing, the quadrature
// value otherwise.
Eigen::VectorXd column_mass_c(const Grid& grid, const KernelJ& J, const DispersalG& g,
                              const AssemblyOptions& options = {});

struct Sigmas {
    double sigma;
    double sigma_prime;
};

Sigmas sigma_and_sigma_prime(const Grid& grid, const KernelJ& J, const DispersalG& g, const CoefficientA& a,
                             const AssemblyOptions& options = {});
Sigmas sigma_and_sigma_prime(const NonlocalOperator& op);

} // namespace nonlocal

#endif
