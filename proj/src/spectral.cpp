#include "nonlocal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nonlocal/error.hpp"

namespace nonlocal {

std::pair<double, double> cw_bracket(const Eigen::MatrixXd& A, const Eigen::VectorXd& phi) {
    if (A.rows() != A.cols() || A.cols() != phi.size())
        throw InvalidArgument("cw_bracket: size mismatch");
    if ((phi.array() <= 0.0).any())
        throw PreconditionError("cw_bracket needs a strictly positive vector");
    const Eigen::ArrayXd ratios = (A * phi).array() / phi.array();
    return {ratios.minCoeff(), ratios.maxCoeff()};
}

namespace {

// Nodes reachable from `start` following K[i][j] > 0 as j -> i (forward) or i -> j.
std::vector<bool> reach(const Eigen::MatrixXd& K, const std::vector<bool>& excluded, Eigen::Index start,
                        bool forward) {
    const Eigen::Index m = K.rows();
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    std::vector<Eigen::Index> stack{start};
    seen[static_cast<std::size_t>(start)] = true;
    while (!stack.empty()) {
        const Eigen::Index v = stack.back();
        stack.pop_back();
        for (Eigen::Index u = 0; u < m; ++u) {
            if (seen[static_cast<std::size_t>(u)] || excluded[static_cast<std::size_t>(u)])
                continue;
            const double entry = forward ? K(u, v) : K(v, u);
            if (entry > 0.0) {
                seen[static_cast<std::size_t>(u)] = true;
                stack.push_back(u);
            }
        }
    }
    return seen;
}

} // namespace

bool is_irreducible(const NonlocalOperator& op) {
    const auto& K = op.integral_part();
    const auto& excluded = op.excluded();
    const Eigen::Index m = K.rows();
    Eigen::Index start = -1;
    for (Eigen::Index i = 0; i < m && start < 0; ++i)
        if (!op.is_excluded(i))
            start = i;
    if (start < 0)
        return false;
    const auto fwd = reach(K, excluded, start, true);
    const auto bwd = reach(K, excluded, start, false);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (excluded[k]) {
            bool fed = false;
            for (Eigen::Index j = 0; j < m && !fed; ++j)
                fed = !excluded[static_cast<std::size_t>(j)] && K(i, j) > 0.0;
            if (!fed)
                return false;
        } else if (!fwd[k] || !bwd[k]) {
            return false;
        }
    }
    return true;
}

double concentration_ratio(const NonlocalOperator& op, const Eigen::VectorXd& phi) {
    const double mass = op.measure().dot(phi);
    if (!(mass > 0.0))
        throw NumericalInconsistency("eigenvector has no mass against dmu");
    return phi.maxCoeff() / mass;
}

EigenReport principal_eigenpair(const NonlocalOperator& op, const EigenOptions& options) {
    if (!(options.tol > 0.0) || options.max_iter < 1)
        throw InvalidArgument("eigen options need tol > 0 and max_iter >= 1");
    if (!is_irreducible(op))
        throw IrreducibilityError("kernel pattern is not strongly connected on the kept nodes");

    const Eigen::Index m = op.size();
    const double k = op.diagonal().cwiseAbs().maxCoeff() + op.column_mass().cwiseAbs().maxCoeff() + 1.0;
    Eigen::MatrixXd shifted = op.matrix();
    shifted.diagonal().array() += k;

    EigenReport report;
    report.shift = k;
    Eigen::VectorXd phi = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd next(m);
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= options.max_iter; ++it) {
        next.noalias() = shifted * phi;
        const Eigen::ArrayXd ratios = next.array() / phi.array();
        lower = ratios.minCoeff();
        upper = ratios.maxCoeff();
        report.bracket_history.push_back(upper - lower);
        report.iterations = it;
        if (upper - lower < options.tol)
            break;
        phi = next / next.maxCoeff();
        if (it >= options.burn_in && (phi.array() <= 0.0).any())
            throw IrreducibilityError("power iterate has zero entries after burn-in");
        if (!phi.allFinite())
            throw NumericalInconsistency("power iterate became non-finite");
    }
    if (!(upper - lower < options.tol))
        throw ConvergenceError("power iteration did not reach the bracket tolerance", lower, upper,
                               report.iterations);

    const double rho = 0.5 * (lower + upper);
    report.cw_lower = lower;
    report.cw_upper = upper;
    report.lambda_p = -(rho - k);
    report.eigenvector = phi;
    report.residual = (op.apply(phi) + report.lambda_p * phi).cwiseAbs().maxCoeff();
    report.concentration = concentration_ratio(op, phi);
    const double amax = op.diagonal().maxCoeff();
    for (Eigen::Index i = 0; i < m; ++i)
        if (op.diagonal()[i] >= amax - 1e-14 * (1.0 + std::abs(amax)))
            report.peak_nodes.push_back(static_cast<std::size_t>(i));
    return report;
}

Integrability integrability_classifier(const CoefficientA& a, int dimension) {
    if (dimension < 1)
        throw InvalidArgument("dimension must be positive");
    if (a.plateau_set())
        return Integrability::plateau;
    if (!a.contact())
        throw InvalidArgument("coefficient carries no contact profile or plateau metadata");
    return a.contact()->gamma >= dimension ? Integrability::non_integrable : Integrability::integrable;
}

ExistenceVerdict classify_ladder(const std::vector<LadderLevel>& levels, const DiagnosticOptions& options) {
    if (levels.size() < 2)
        return ExistenceVerdict::inconclusive;
    const std::size_t last = levels.size() - 1;
    auto gap = [&](std::size_t k) { return -levels[k].sigma - levels[k].lambda_p; };

    const double ratio_change = std::abs(levels[last].concentration / levels[last - 1].concentration - 1.0);
    bool gaps_positive = true;
    for (std::size_t k = 0; k <= last; ++k)
        gaps_positive = gaps_positive && gap(k) > 0.0;
    const bool gap_stable = std::abs(gap(last) - gap(last - 1)) <= options.gap_stability * gap(last - 1);
    if (ratio_change <= options.ratio_stability && gaps_positive && gap_stable)
        return ExistenceVerdict::exists;

    bool growing = true;
    bool closing = true;
    for (std::size_t k = 1; k <= last; ++k) {
        growing = growing && levels[k].concentration >= options.growth * levels[k - 1].concentration;
        closing = closing && gap(k) < gap(k - 1);
    }
    if (growing && closing && gap(last) <= 0.5 * gap(0))
        return ExistenceVerdict::degenerate;
    return ExistenceVerdict::inconclusive;
}

ExistenceDiagnostic existence_diagnostic(const OperatorBuilder& build, const std::vector<int>& ladder,
                                         const EigenOptions& eigen, const DiagnosticOptions& options) {
    if (ladder.size() < 4)
        throw PreconditionError("existence diagnostic needs at least 4 ladder levels");
    for (std::size_t k = 1; k < ladder.size(); ++k) {
        const int prev = ladder[k - 1];
        if (ladder[k] != 2 * prev && ladder[k] != 2 * prev - 1)
            throw PreconditionError("ladder levels must double N");
    }
    ExistenceDiagnostic out;
    for (int N : ladder) {
        const NonlocalOperator op = build(N);
        const EigenReport eig = principal_eigenpair(op, eigen);
        const Sigmas s = sigma_and_sigma_prime(op);
        out.levels.push_back(
            LadderLevel{N, op.grid().min_spacing(), eig.lambda_p, s.sigma, s.sigma_prime, eig.concentration,
                        eig.iterations});
    }
    out.verdict = classify_ladder(out.levels, options);
    return out;
}

NonlocalOperator rank_one_operator(const Grid& grid, double rho, const CoefficientA& a) {
    return rank_one_operator(grid, rho, grid.sample([&a](const Point& x) { return a(x); }));
}

NonlocalOperator rank_one_operator(const Grid& grid, double rho, const Eigen::VectorXd& a_values) {
    if (!(rho > 0.0))
        throw InvalidArgument("rank-one kernel needs rho > 0");
    if (grid.domain().is_torus())
        throw PreconditionError("rank-one operator is defined on bounded domains");
    const auto m = static_cast<Eigen::Index>(grid.size());
    if (a_values.size() != m)
        throw InvalidArgument("coefficient sample count does not match grid");
    Eigen::MatrixXd K = rho * Eigen::VectorXd::Ones(m) * grid.weights().transpose();
    const double mass = rho * grid.weights().sum();
    return NonlocalOperator(grid, std::move(K), a_values, grid.weights(), Eigen::VectorXd::Constant(m, mass),
                            std::vector<bool>(grid.size(), false));
}

RankOneRoot rank_one_bisection(const CoefficientA& a_bar, double c0, const Grid& grid,
                               const BisectionOptions& options) {
    return rank_one_bisection(grid.sample([&a_bar](const Point& x) { return a_bar(x); }), grid.weights(), c0,
                              options);
}

RankOneRoot rank_one_bisection(const Eigen::VectorXd& a_bar, const Eigen::VectorXd& dmu, double c0,
                               const BisectionOptions& options) {
    if (!(c0 > 0.0))
        throw InvalidArgument("rank-one bisection needs c0 > 0");
    if (a_bar.size() != dmu.size() || a_bar.size() == 0)
        throw InvalidArgument("rank-one bisection: size mismatch");
    const double top = a_bar.maxCoeff();
    const double level_tol = 1e-14 * (1.0 + std::abs(top));
    double resolution = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < a_bar.size(); ++j) {
        const double gap = top - a_bar[j];
        if (gap > level_tol)
            resolution = std::min(resolution, gap);
    }
    const bool flat = !std::isfinite(resolution);

    auto F = [&](double lambda) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < a_bar.size(); ++j)
            sum += dmu[j] * c0 / (-lambda - a_bar[j]);
        return sum;
    };

    RankOneRoot root;
    double d_lo = 2.0 * c0 * dmu.sum() + 1.0;
    int expand = 0;
    while (F(-top - d_lo) >= 1.0) {
        if (++expand > options.max_expand)
            throw CriterionFailure("rank-one bisection: no lower bracket", F(-top - d_lo));
        d_lo *= 2.0;
    }
    double d_hi = d_lo;
    bool found = false;
    for (int k = 0; k < options.max_expand; ++k) {
        d_hi *= 0.5;
        if (!flat && d_hi <= resolution) {
            d_hi = resolution;
            found = F(-top - d_hi) > 1.0;
            break;
        }
        if (F(-top - d_hi) > 1.0) {
            found = true;
            break;
        }
    }
    if (!found)
        throw CriterionFailure("F(lambda) stays below 1 up to the resolved edge of the spectrum",
                               F(-top - (flat ? d_hi : resolution)));

    double lo = -top - d_lo; // F < 1
    double hi = -top - d_hi; // F > 1
    double lambda = 0.5 * (lo + hi);
    double value = F(lambda);
    int it = 0;
    while (std::abs(value - 1.0) > options.tol && it < options.max_bisect) {
        (value < 1.0 ? lo : hi) = lambda;
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break;
        lambda = mid;
        value = F(lambda);
        ++it;
    }
    root.lambda = lambda;
    root.F = value;
    root.iterations = it;
    root.phi = c0 / (-lambda - a_bar.array());
    return root;
}

ExhaustionResult exhaustion_lambda(const UnboundedLine& line, const KernelJ& J, const DispersalG& g,
                                   const CoefficientA& a, std::size_t levels, double h,
                                   const AssemblyOptions& assembly, const EigenOptions& eigen) {
    if (!(h > 0.0))
        throw InvalidArgument("exhaustion spacing must be positive");
    const auto domains = exhaustion_sequence(line, levels);
    ExhaustionResult out;
    for (const auto& domain : domains) {
        const double cells = domain.axis(0).length() / h;
        const double rounded = std::round(cells);
        if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells))
            throw PreconditionError("window length is not a multiple of the spacing h");
        const int N = static_cast<int>(rounded) + 1;
        const Grid grid = build_grid(domain, N);
        const NonlocalOperator op = assemble(grid, J, g, a, assembly);
        const EigenReport eig = principal_eigenpair(op, eigen);
        const Sigmas s = sigma_and_sigma_prime(op);
        if (!out.levels.empty() && eig.lambda_p > out.levels.back().lambda_p + 1e-10)
            throw NumericalInconsistency("principal eigenvalue increased on a larger window: " +
                                         std::to_string(eig.lambda_p) + " > " +
                                         std::to_string(out.levels.back().lambda_p));
        out.levels.push_back(ExhaustionLevel{domain, N, eig.lambda_p, s.sigma, s.sigma_prime});
    }
    const auto& last = out.levels.back();
    out.limit = last.lambda_p;
    out.final_increment = out.levels[out.levels.size() - 2].lambda_p - last.lambda_p;
    out.in_bracket = -last.sigma_prime - 1e-8 < last.lambda_p && last.lambda_p < -last.sigma + 1e-8;
    return out;
}

double harnack_ratio(const NonlocalOperator& op, const Eigen::VectorXd& phi, const Domain& inner) {
    const Domain& outer = op.grid().domain();
    if (inner.dimension() != outer.dimension())
        throw PreconditionError("harnack_ratio: dimension mismatch");
    for (int d = 0; d < outer.dimension(); ++d) {
        const auto& o = outer.axis(d);
        const auto& w = inner.axis(d);
        const bool inside = outer.is_torus() ? (o.lower <= w.lower && w.upper <= o.upper)
                                             : (o.lower < w.lower && w.upper < o.upper);
        if (!inside)
            throw PreconditionError("harnack_ratio: sub-box is not compactly contained in the domain");
    }
    if (phi.size() != op.size())
        throw InvalidArgument("harnack_ratio: vector size mismatch");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
        if (!inner.contains(op.grid().node(static_cast<std::size_t>(i)), 1e-12))
            continue;
        lo = std::min(lo, phi[i]);
        hi = std::max(hi, phi[i]);
    }
    if (!std::isfinite(lo))
        throw PreconditionError("harnack_ratio: no grid nodes inside the sub-box");
    if (!(lo > 0.0))
        throw PreconditionError("harnack_ratio: eigenvector is not positive on the sub-box");
    return hi / lo;
}

} // namespace nonlocal
