#include "nonlocal/operator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nonlocal/error.hpp"

namespace nonlocal {

NonlocalOperator::NonlocalOperator(Grid grid, Eigen::MatrixXd K, Eigen::VectorXd a, Eigen::VectorXd dmu,
                                   Eigen::VectorXd column_mass, std::vector<bool> excluded)
    : grid_(std::move(grid)), K_(std::move(K)), a_(std::move(a)), dmu_(std::move(dmu)), c_(std::move(column_mass)),
      excluded_(std::move(excluded)) {
    const auto m = static_cast<Eigen::Index>(grid_.size());
    if (K_.rows() != m || K_.cols() != m || a_.size() != m || dmu_.size() != m || c_.size() != m ||
        excluded_.size() != grid_.size())
        throw InvalidArgument("operator parts do not match the grid size");
    if (!K_.allFinite() || !a_.allFinite())
        throw InvalidArgument("operator has non-finite entries");
}

Eigen::MatrixXd NonlocalOperator::matrix() const {
    Eigen::MatrixXd A = K_;
    A.diagonal() += a_;
    return A;
}

Eigen::VectorXd NonlocalOperator::apply(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out = K_ * u;
    out.array() += a_.array() * u.array();
    return out;
}

NonlocalOperator NonlocalOperator::with_diagonal(Eigen::VectorXd a) const {
    return NonlocalOperator(grid_, K_, std::move(a), dmu_, c_, excluded_);
}

double eval_kernel(const KernelJ& J, const DispersalG& g, const Domain& domain, const Point& x, const Point& y) {
    const double gy = g(y);
    if (!(gy > 0.0))
        throw DegeneratePointError("kernel evaluated at a point where g vanishes");
    const Point d = domain.displacement(x, y);
    const Point z{d[0] / gy, d[1] / gy};
    return J(z) / std::pow(gy, domain.dimension());
}

namespace {

bool renormalizing(const Grid& grid, const AssemblyOptions& options) {
    return options.renormalize.value_or(grid.domain().is_torus());
}

// Unnormalized column j: entries J((x_i - x_j)/g_j) w_j / g_j^n.
void fill_column(const Grid& grid, const KernelJ& J, double gj, Eigen::Index j, double* column) {
    const Domain& domain = grid.domain();
    const int n = grid.dimension();
    const double reach = J.support() * gj;
    const double scale = grid.weights()[j] / std::pow(gj, n);
    const Point& xj = grid.node(static_cast<std::size_t>(j));
    const auto m = static_cast<Eigen::Index>(grid.size());
    for (Eigen::Index i = 0; i < m; ++i) {
        const Point d = domain.displacement(grid.node(static_cast<std::size_t>(i)), xj);
        if (std::abs(d[0]) > reach || std::abs(d[1]) > reach) {
            column[i] = 0.0;
            continue;
        }
        column[i] = J(Point{d[0] / gj, d[1] / gj}) * scale;
    }
}

double weighted_column_mass(const Grid& grid, const double* column, Eigen::Index j) {
    const auto m = static_cast<Eigen::Index>(grid.size());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
        sum += grid.weights()[i] * column[i];
    return sum / grid.weights()[j];
}

} // namespace

double continuum_column_mass(const Domain& domain, const KernelJ& J, const DispersalG& g, const Point& x,
                             double g_floor) {
    const double gx = g(x);
    if (gx < g_floor)
        return 1.0;
    const double s = J.support();
    Point lo{-s, -s};
    Point hi{s, s};
    bool clipped = false;
    for (int d = 0; d < domain.dimension(); ++d) {
        const auto k = static_cast<std::size_t>(d);
        const auto& ax = domain.axis(d);
        double a = 0.0;
        double b = 0.0;
        if (domain.is_torus()) {
            a = -0.5 * ax.length() / gx;
            b = 0.5 * ax.length() / gx;
        } else {
            a = (ax.lower - x[k]) / gx;
            b = (ax.upper - x[k]) / gx;
        }
        if (a > -s) {
            lo[k] = a;
            clipped = true;
        }
        if (b < s) {
            hi[k] = b;
            clipped = true;
        }
    }
    return clipped ? J.box_mass(lo, hi) : J.numeric_mass();
}

NonlocalOperator assemble(const Grid& grid, const KernelJ& J, const DispersalG& g, const CoefficientA& a,
                          const AssemblyOptions& options) {
    if (J.dimension() != grid.dimension())
        throw InvalidArgument("kernel dimension does not match the grid");
    if (g.degenerate() && !options.exclude_degenerate)
        throw DegeneratePointError("degenerate g requires the exclusion path (exclude_degenerate)");

    const auto m = static_cast<Eigen::Index>(grid.size());
    const bool renorm = renormalizing(grid, options);
    const Eigen::VectorXd g_values = grid.sample([&g](const Point& x) { return g(x); });
    MeasureWeights mw = measure_weights(grid, g_values, options.g_floor);

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd c = Eigen::VectorXd::Ones(m);
    const double full_mass = J.numeric_mass();
    for (Eigen::Index j = 0; j < m; ++j) {
        if (mw.degenerate[static_cast<std::size_t>(j)]) {
            if (!options.exclude_degenerate)
                throw DegeneratePointError("g(x) = " + std::to_string(g_values[j]) + " below the floor at node " +
                                           std::to_string(j));
            continue;
        }
        double* column = K.col(j).data();
        fill_column(grid, J, g_values[j], j, column);
        const double discrete = weighted_column_mass(grid, column, j);
        if (!renorm) {
            c[j] = discrete;
            continue;
        }
        const Point& xj = grid.node(static_cast<std::size_t>(j));
        const double target = grid.domain().is_torus() && J.support() * g_values[j] < 0.5 * grid.domain().smallest_side()
                                  ? full_mass
                                  : continuum_column_mass(grid.domain(), J, g, xj, options.g_floor);
        if (discrete > 0.0)
            K.col(j) *= target / discrete;
        c[j] = target;
    }

    Eigen::VectorXd a_values = grid.sample([&a](const Point& x) { return a(x); });
    if (!K.allFinite() || !a_values.allFinite())
        throw InvalidArgument("assembled operator has non-finite entries");
    return NonlocalOperator(grid, std::move(K), std::move(a_values), std::move(mw.dmu), std::move(c),
                            std::move(mw.degenerate));
}

FloorConstants kernel_floor_constants(const KernelJ& J, const DispersalG& g) {
    const double j0 = J.value_at_origin();
    if (!(j0 > 0.0))
        throw InvalidArgument("kernel floor constants need J(0) > 0");
    if (g.degenerate() || !(g.alpha() > 0.0))
        throw PreconditionError("kernel floor constants need g >= alpha > 0");
    const double c0 = 0.5 * j0;
    const int n = J.dimension();
    const int directions = n == 1 ? 2 : 32;
    auto holds = [&](double radius) {
        for (int k = 0; k <= 64; ++k) {
            const double rho = radius * k / 64.0;
            for (int d = 0; d < directions; ++d) {
                const double angle = 2.0 * std::numbers::pi * d / directions;
                const Point z = n == 1 ? Point{d == 0 ? rho : -rho, 0.0}
                                       : Point{rho * std::cos(angle), rho * std::sin(angle)};
                if (J(z) < c0)
                    return false;
            }
        }
        return true;
    };
    double lo = 0.0;
    double hi = J.support();
    if (holds(hi)) {
        lo = hi;
    } else {
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (holds(mid) ? lo : hi) = mid;
        }
    }
    return FloorConstants{c0, lo, 0.5 * lo * g.alpha()};
}

Eigen::VectorXd column_mass_c(const Grid& grid, const KernelJ& J, const DispersalG& g,
                              const AssemblyOptions& options) {
    const auto m = static_cast<Eigen::Index>(grid.size());
    const bool renorm = renormalizing(grid, options);
    Eigen::VectorXd c(m);
    Eigen::VectorXd column(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Point& xj = grid.node(static_cast<std::size_t>(j));
        const double gj = g(xj);
        if (gj < options.g_floor) {
            c[j] = 1.0;
        } else if (renorm) {
            c[j] = continuum_column_mass(grid.domain(), J, g, xj, options.g_floor);
        } else {
            fill_column(grid, J, gj, j, column.data());
            c[j] = weighted_column_mass(grid, column.data(), j);
        }
    }
    return c;
}

Sigmas sigma_and_sigma_prime(const Grid& grid, const KernelJ& J, const DispersalG& g, const CoefficientA& a,
                             const AssemblyOptions& options) {
    const Eigen::VectorXd a_values = grid.sample([&a](const Point& x) { return a(x); });
    const Eigen::VectorXd c = column_mass_c(grid, J, g, options);
    return Sigmas{a_values.maxCoeff(), (a_values + c).maxCoeff()};
}

Sigmas sigma_and_sigma_prime(const NonlocalOperator& op) {
    return Sigmas{op.diagonal().maxCoeff(), (op.diagonal() + op.column_mass()).maxCoeff()};
}

} // namespace nonlocal
