#include "nonlocal/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "nonlocal/error.hpp"

namespace nonlocal {

KPPNonlinearity KPPNonlinearity::logistic(Field mu, double saturation) {
    if (!(saturation > 0.0))
        throw InvalidArgument("saturation bound must be positive");
    KPPNonlinearity f;
    f.f_ = [mu](const Point& x, double u) { return u * (mu(x) - u); };
    f.fu0_ = mu;
    f.M_ = saturation;
    f.lip_ = [mu](const Point& x, double U) { return std::abs(mu(x)) + 2.0 * U; };
    return f;
}

KPPNonlinearity KPPNonlinearity::logistic(double mu0, double mu2) {
    if (mu2 < 0.0)
        throw InvalidArgument("logistic profile needs mu2 >= 0 so that mu0 bounds mu");
    auto mu = [mu0, mu2](const Point& x) { return mu0 - mu2 * (x[0] * x[0] + x[1] * x[1]); };
    return logistic(mu, mu0 > 0.0 ? mu0 : 1.0);
}

KPPNonlinearity KPPNonlinearity::custom(Reaction f, Field derivative_at_zero, double saturation,
                                        LipschitzBound lipschitz) {
    if (!(saturation > 0.0))
        throw InvalidArgument("saturation bound must be positive");
    KPPNonlinearity out;
    out.f_ = std::move(f);
    out.fu0_ = std::move(derivative_at_zero);
    out.M_ = saturation;
    out.lip_ = std::move(lipschitz);
    return out;
}

Eigen::VectorXd KPPNonlinearity::evaluate(const Grid& grid, const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i)
        out[i] = f_(grid.node(static_cast<std::size_t>(i)), u[i]);
    return out;
}

Eigen::VectorXd KPPNonlinearity::derivative_at_zero(const Grid& grid) const {
    return grid.sample(fu0_);
}

double KPPNonlinearity::lipschitz(const Grid& grid, double U) const {
    double best = 0.0;
    for (const auto& x : grid.nodes())
        best = std::max(best, lip_(x, U));
    return best;
}

void KPPNonlinearity::validate(const Grid& grid) const {
    for (const auto& x : grid.nodes()) {
        if (f_(x, 0.0) != 0.0)
            throw InvalidArgument("nonlinearity must vanish at u = 0");
        if (f_(x, M_) > 0.0 || f_(x, 2.0 * M_) > 0.0)
            throw InvalidArgument("nonlinearity is positive above its saturation bound");
        double previous = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 16; ++k) {
            const double u = 2.0 * M_ * k / 16.0;
            const double ratio = f_(x, u) / u;
            if (ratio > previous + 1e-10)
                throw InvalidArgument("f(x, u)/u is not non-increasing in u");
            previous = ratio;
        }
    }
}

NonlocalOperator linearization(const NonlocalOperator& op, const KPPNonlinearity& f) {
    return op.with_diagonal(op.diagonal() + f.derivative_at_zero(op.grid()));
}

SurvivalReport survival_criterion(const NonlocalOperator& linearized, const EigenOptions& eigen, double threshold) {
    const EigenReport report = principal_eigenpair(linearized, eigen);
    SurvivalReport out;
    out.lambda_p = report.lambda_p;
    if (report.lambda_p < -threshold)
        out.verdict = Survival::persistence;
    else if (report.lambda_p > threshold)
        out.verdict = Survival::extinction;
    else
        out.verdict = Survival::borderline;
    return out;
}

namespace {

// Smooth step: 1 for t <= 1, 0 for t >= 2.
double bump(double t) {
    auto psi = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    const double up = psi(2.0 - t);
    const double down = psi(t - 1.0);
    return up / (up + down);
}

Eigen::VectorXd reaction_residual(const NonlocalOperator& op, const KPPNonlinearity& f, const Eigen::VectorXd& u) {
    return op.apply(u) + f.evaluate(op.grid(), u);
}

} // namespace

Subsolution build_subsolution(const NonlocalOperator& op, const KPPNonlinearity& f,
                              const SubsolutionOptions& options) {
    if (options.n < 1 || !(options.epsilon > 0.0))
        throw InvalidArgument("subsolution needs n >= 1 and epsilon > 0");
    const NonlocalOperator lin = linearization(op, f);
    const EigenReport base = principal_eigenpair(lin, options.eigen);
    if (!(base.lambda_p < 0.0))
        throw PreconditionError("a positive subsolution needs lambda_p of the linearization < 0");

    const Grid& grid = op.grid();
    const Eigen::VectorXd& a_lin = lin.diagonal();
    Eigen::Index top = 0;
    const double sigma = a_lin.maxCoeff(&top);
    const Point center = grid.node(static_cast<std::size_t>(top));
    Eigen::VectorXd raised = a_lin;
    for (Eigen::Index i = 0; i < raised.size(); ++i) {
        const double chi = bump(options.n * grid.domain().distance(grid.node(static_cast<std::size_t>(i)), center));
        raised[i] += chi * (sigma - a_lin[i]);
    }
    const EigenReport perturbed = principal_eigenpair(lin.with_diagonal(raised), options.eigen);

    Subsolution out;
    out.lambda_n = perturbed.lambda_p;
    double epsilon = options.epsilon;
    for (int h = 0; h <= options.max_halvings; ++h, epsilon *= 0.5) {
        const Eigen::VectorXd candidate = epsilon * perturbed.eigenvector;
        if (reaction_residual(op, f, candidate).minCoeff() >= -1e-10) {
            out.values = candidate;
            out.epsilon = epsilon;
            out.halvings = h;
            return out;
        }
    }
    throw SubsolutionError("no epsilon makes epsilon * phi_n a subsolution; lambda_p is too close to 0 at this "
                           "resolution");
}

KPPSolution steady_state(const NonlocalOperator& op, const KPPNonlinearity& f, const Eigen::VectorXd& sub,
                         const Eigen::VectorXd& sup, const SteadyOptions& options) {
    const Eigen::Index m = op.size();
    if (sub.size() != m || sup.size() != m)
        throw InvalidArgument("bracket size does not match operator");
    if ((sub.array() > sup.array()).any())
        throw PreconditionError("subsolution must lie below the supersolution");
    if ((sub.array() < 0.0).any())
        throw PreconditionError("subsolution must be nonnegative");

    StartSide side = options.start;
    if (side == StartSide::automatic)
        side = sub.maxCoeff() > 0.0 ? StartSide::subsolution : StartSide::supersolution;
    if (side == StartSide::subsolution && !(sub.maxCoeff() > 0.0))
        throw PreconditionError("the zero subsolution is a fixed point; start from the supersolution");

    const Grid& grid = op.grid();
    const double bound = sup.cwiseAbs().maxCoeff();
    const double a_norm = op.diagonal().cwiseAbs().maxCoeff();
    const double k = options.k.value_or(
        std::max(a_norm + f.lipschitz(grid, bound) + 1.0, a_norm + op.column_mass().cwiseAbs().maxCoeff() + 1.0));
    if (!(k > 0.0))
        throw InvalidArgument("resolvent shift must be positive");

    Eigen::MatrixXd resolvent = -op.matrix();
    resolvent.diagonal().array() += k;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(resolvent);
    if (!(lu.rcond() > 1e-14))
        throw ResolventError("kI - A is singular to working precision");

    KPPSolution out;
    out.k = k;
    out.start = side;
    Eigen::VectorXd u = side == StartSide::subsolution ? sub : sup;
    const double slack = 1e-11 * std::max(1.0, bound);
    for (int it = 1; it <= options.max_iter; ++it) {
        const Eigen::VectorXd next = lu.solve(k * u + f.evaluate(grid, u));
        const bool ordered = side == StartSide::subsolution
                                 ? (next.array() >= u.array() - slack).all() && (next.array() <= sup.array() + slack).all()
                                 : (next.array() <= u.array() + slack).all() && (next.array() >= sub.array() - slack).all();
        if (!ordered)
            throw MonotonicityError("iterate left the monotone corridor at step " + std::to_string(it) +
                                    "; increase k (now " + std::to_string(k) + ")");
        u = next;
        out.iterations = it;
        out.residual = reaction_residual(op, f, u).cwiseAbs().maxCoeff();
        if (out.residual <= options.tol)
            break;
    }
    if (!(out.residual <= options.tol))
        throw ConvergenceError("monotone iteration did not reach the residual tolerance", 0.0, out.residual,
                               out.iterations);
    out.p = u;
    out.min_value = u.minCoeff();
    out.trivial = u.cwiseAbs().maxCoeff() <= std::max(options.tol, 1e-12) * 10.0;
    return out;
}

Eigen::VectorXd kpp_limit(const NonlocalOperator& op, const KPPNonlinearity& f, const SteadyOptions& steady,
                          const SubsolutionOptions& sub) {
    const SurvivalReport survival = survival_criterion(linearization(op, f), sub.eigen);
    const Eigen::Index m = op.size();
    if (survival.verdict != Survival::persistence)
        return Eigen::VectorXd::Zero(m);
    const Subsolution s = build_subsolution(op, f, sub);
    const Eigen::VectorXd sup = Eigen::VectorXd::Constant(m, 2.0 * f.saturation());
    return steady_state(op, f, s.values, sup, steady).p;
}

UniquenessReport uniqueness_check(const NonlocalOperator& op, const KPPNonlinearity& f,
                                  const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& brackets,
                                  const SteadyOptions& options) {
    if (brackets.size() < 2)
        throw PreconditionError("uniqueness check needs at least two brackets");
    UniquenessReport out;
    for (const auto& [sub, sup] : brackets)
        out.solutions.push_back(steady_state(op, f, sub, sup, options));
    for (std::size_t i = 0; i < out.solutions.size(); ++i)
        for (std::size_t j = i + 1; j < out.solutions.size(); ++j)
            out.max_distance =
                std::max(out.max_distance, (out.solutions[i].p - out.solutions[j].p).cwiseAbs().maxCoeff());
    return out;
}

EvolutionTrace evolve(const NonlocalOperator& op, const KPPNonlinearity& f, const Eigen::VectorXd& u0,
                      const EvolveOptions& options) {
    const Eigen::Index m = op.size();
    if (u0.size() != m)
        throw InvalidArgument("initial state size does not match operator");
    if (!u0.allFinite() || (u0.array() < 0.0).any())
        throw PreconditionError("initial state must be finite and nonnegative");
    if (!(u0.maxCoeff() > 0.0))
        throw PreconditionError("initial state must not vanish identically");
    if (!(options.T > 0.0) || options.checkpoints < 1)
        throw InvalidArgument("evolve needs T > 0 and at least one checkpoint");

    const Grid& grid = op.grid();
    EvolutionTrace trace;
    trace.reference = options.reference ? *options.reference : kpp_limit(op, f);
    if (trace.reference.size() != m)
        throw InvalidArgument("reference state size does not match operator");

    double dt = options.dt;
    if (!(dt > 0.0)) {
        if (options.stepper == Stepper::imex) {
            dt = 0.5;
        } else {
            const double U = std::max(u0.maxCoeff(), f.saturation());
            dt = 1.0 / (op.diagonal().cwiseAbs().maxCoeff() + op.column_mass().cwiseAbs().maxCoeff() +
                        f.lipschitz(grid, U));
        }
    }
    const auto steps =
        std::max(static_cast<long>(std::ceil(options.T / dt - 1e-12)), static_cast<long>(options.checkpoints));
    dt = options.T / static_cast<double>(steps);
    trace.dt = dt;
    trace.steps = steps;

    std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> implicit;
    if (options.stepper == Stepper::imex) {
        Eigen::MatrixXd system = -dt * op.matrix();
        system.diagonal().array() += 1.0;
        implicit.emplace(system);
    }

    Eigen::VectorXd u = u0;
    int next_checkpoint = 1;
    for (long s = 1; s <= steps; ++s) {
        if (implicit)
            u = implicit->solve(u + dt * f.evaluate(grid, u));
        else
            u += dt * (op.apply(u) + f.evaluate(grid, u));
        const double lo = u.minCoeff();
        if (lo < -1e-8 || !u.allFinite())
            throw StabilityError("density became negative (" + std::to_string(lo) + ") at t = " +
                                 std::to_string(s * dt) + "; reduce dt");
        while (next_checkpoint <= options.checkpoints &&
               s == static_cast<long>(std::llround(static_cast<double>(steps) * next_checkpoint / options.checkpoints))) {
            trace.times.push_back(s * dt);
            trace.dist_to_p.push_back((u - trace.reference).cwiseAbs().maxCoeff());
            trace.dist_to_0.push_back(u.cwiseAbs().maxCoeff());
            trace.min_u.push_back(lo);
            trace.max_u.push_back(u.maxCoeff());
            ++next_checkpoint;
        }
    }
    trace.final_state = u;
    const double sup_u = u.cwiseAbs().maxCoeff();
    const double to_p = (u - trace.reference).cwiseAbs().maxCoeff();
    if (sup_u < options.tol)
        trace.outcome = Outcome::converged_to_0;
    else if (to_p < options.tol)
        trace.outcome = Outcome::converged_to_p;
    else
        trace.outcome = Outcome::undecided;
    return trace;
}

} // namespace nonlocal
