#include "nonlocal/maxprinciple.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/LU>

#include "nonlocal/error.hpp"

namespace nonlocal {

namespace {

std::vector<Eigen::Index> interior_nodes(const Grid& grid) {
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!grid.on_boundary(i))
            idx.push_back(static_cast<Eigen::Index>(i));
    return idx;
}

double kernel_sup(const NonlocalOperator& op) {
    const auto& K = op.integral_part();
    double best = 0.0;
    for (Eigen::Index j = 0; j < K.cols(); ++j) {
        const double dmu = op.measure()[j];
        if (op.is_excluded(j) || !(dmu > 0.0))
            continue;
        best = std::max(best, K.col(j).maxCoeff() / dmu);
    }
    return best;
}

} // namespace

WitnessCheck verify_witness(const NonlocalOperator& op, const Eigen::VectorXd& w) {
    if (w.size() != op.size())
        throw InvalidArgument("witness size does not match operator");
    const Eigen::VectorXd Mw = op.apply(w);
    WitnessCheck check;
    check.max_interior = -std::numeric_limits<double>::infinity();
    check.min_boundary = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (op.grid().on_boundary(static_cast<std::size_t>(i)))
            check.min_boundary = std::min(check.min_boundary, w[i]);
        else
            check.max_interior = std::max(check.max_interior, Mw[i]);
    }
    check.min_value = w.minCoeff();
    check.sound = check.max_interior <= 1e-10 && check.min_boundary >= -1e-12 && check.min_value < -1e-6;
    return check;
}

Eigen::VectorXd witness_from_eigenfunction(const NonlocalOperator& op, const EigenReport& eigen,
                                           double cutoff_margin) {
    const Grid& grid = op.grid();
    const Domain& domain = grid.domain();
    if (domain.is_torus())
        throw PreconditionError("a witness needs a boundary");
    if (!(eigen.lambda_p < 0.0))
        throw PreconditionError("a witness exists only when lambda_p < 0");
    if (!(cutoff_margin > 0.0) || cutoff_margin >= 0.5 * domain.smallest_side())
        throw PreconditionError("cutoff margin must lie in (0, half the smallest side)");
    const Eigen::VectorXd& phi = eigen.eigenvector;
    if (phi.size() != op.size())
        throw InvalidArgument("eigenvector size does not match operator");

    double phi_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < phi.size(); ++i)
        if (!op.is_excluded(i))
            phi_min = std::min(phi_min, phi[i]);
    if (!(phi_min > 0.0))
        throw PreconditionError("eigenvector is not positive");

    // Budget for the measure of the ramp region.
    const double sigma = op.diagonal().maxCoeff();
    const double gap = -eigen.lambda_p - sigma;
    const double rate = gap > 0.0 ? std::min(gap, -eigen.lambda_p) : -eigen.lambda_p;
    const double budget = phi_min * rate / (2.0 * kernel_sup(op));

    const double h = grid.min_spacing();
    const auto widest = static_cast<int>(std::floor(cutoff_margin / h + 1e-9));
    std::vector<double> distance(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        distance[i] = domain.distance_to_boundary(grid.node(i));

    for (int m = std::max(widest, 1); m >= 1; --m) {
        const double theta = m * h;
        double outer = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (distance[i] < theta - 1e-12 * h)
                outer += op.measure()[static_cast<Eigen::Index>(i)];
        if (outer > budget && m > 1)
            continue;
        Eigen::VectorXd w(phi.size());
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            const double eta = std::min(1.0, distance[static_cast<std::size_t>(i)] / theta);
            w[i] = -phi[i] * eta;
        }
        if (verify_witness(op, w).sound)
            return w;
    }
    throw WitnessError("no cutoff of width <= " + std::to_string(cutoff_margin) +
                       " yields a witness at this resolution; refine the grid");
}

MPReport check_mp(const NonlocalOperator& op, const MPOptions& options) {
    if (op.grid().domain().is_torus())
        throw PreconditionError("the maximum principle needs a bounded domain");
    return check_mp(op, principal_eigenpair(op, options.eigen), options);
}

MPReport check_mp(const NonlocalOperator& op, const EigenReport& eigen, const MPOptions& options) {
    if (op.grid().domain().is_torus())
        throw PreconditionError("the maximum principle needs a bounded domain");
    MPReport report;
    report.lambda_p = eigen.lambda_p;
    if (std::abs(eigen.lambda_p) < options.resonance)
        throw ResonanceError("lambda_p = " + std::to_string(eigen.lambda_p) +
                             " is numerically zero; perturb a to obtain a verdict");

    if (eigen.lambda_p < 0.0) {
        report.verdict = MPVerdict::violated;
        report.witness = witness_from_eigenfunction(op, eigen, options.cutoff_margin);
        return report;
    }

    report.verdict = MPVerdict::holds;
    const auto inner = interior_nodes(op.grid());
    const auto mi = static_cast<Eigen::Index>(inner.size());
    const Eigen::MatrixXd A = op.matrix();
    Eigen::MatrixXd neg(mi, mi);
    for (Eigen::Index r = 0; r < mi; ++r)
        for (Eigen::Index c = 0; c < mi; ++c)
            neg(r, c) = -A(inner[static_cast<std::size_t>(r)], inner[static_cast<std::size_t>(c)]);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(neg);
    if (!(lu.rcond() > 1e-14))
        throw ResonanceError("interior block is singular to working precision");

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    report.battery_min = std::numeric_limits<double>::infinity();
    for (int b = 0; b < options.battery; ++b) {
        Eigen::VectorXd f(mi);
        for (Eigen::Index r = 0; r < mi; ++r)
            f[r] = unit(rng);
        const Eigen::VectorXd u = lu.solve(f);
        const double lo = u.minCoeff();
        report.battery_mins.push_back(lo);
        report.battery_min = std::min(report.battery_min, lo);
        if (lo < -1e-10)
            throw NumericalInconsistency("battery solve produced u = " + std::to_string(lo) +
                                         " < 0 although lambda_p > 0");
    }
    report.battery_size = options.battery;
    if (op.grid().size() <= options.exact_inverse_limit) {
        report.inverse_min = lu.inverse().minCoeff();
        if (*report.inverse_min < -1e-12)
            throw NumericalInconsistency("interior inverse has a negative entry although lambda_p > 0");
    }
    return report;
}

} // namespace nonlocal
