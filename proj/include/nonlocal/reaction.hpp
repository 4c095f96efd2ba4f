#ifndef NONLOCAL_REACTION_HPP
#define NONLOCAL_REACTION_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nonlocal/spectral.hpp"

namespace nonlocal {

/// KPP-type reaction f(x, u): f(x, 0) = 0, f(x, u)/u non-increasing in u,
/// f(x, u) <= 0 for u >= M.
class KPPNonlinearity {
public:
    using Reaction = std::function<double(const Point&, double)>;
    using Field = std::function<double(const Point&)>;
    // Bound on |d f/d u| at x over u in [0, U].
    using LipschitzBound = std::function<double(const Point&, double U)>;

    // f = u (mu(x) - u), saturation M.
    static KPPNonlinearity logistic(Field mu, double saturation);
    // mu(x) = mu0 - mu2 |x|^2 with mu2 >= 0; M = mu0 if positive, else 1.
    static KPPNonlinearity logistic(double mu0, double mu2 = 0.0);
    static KPPNonlinearity custom(Reaction f, Field derivative_at_zero, double saturation, LipschitzBound lipschitz);

    double operator()(const Point& x, double u) const { return f_(x, u); }
    double derivative_at_zero(const Point& x) const { return fu0_(x); }
    double saturation() const noexcept { return M_; }

    Eigen::VectorXd evaluate(const Grid& grid, const Eigen::VectorXd& u) const;
    Eigen::VectorXd derivative_at_zero(const Grid& grid) const;
    // max over nodes of the Lipschitz bound on [0, U].
    double lipschitz(const Grid& grid, double U) const;

    // Samples the three structural conditions on the grid; throws InvalidArgument.
    void validate(const Grid& grid) const;

private:
    Reaction f_;
    Field fu0_;
    double M_ = 1.0;
    LipschitzBound lip_;
};

// Same kernel with diagonal a + f_u(., 0).
NonlocalOperator linearization(const NonlocalOperator& op, const KPPNonlinearity& f);

enum class Survival { persistence, extinction, borderline };

struct SurvivalReport {
    double lambda_p = 0.0;
    Survival verdict = Survival::borderline;
};

// `linearized` already carries a = f_u(., 0) - b.
SurvivalReport survival_criterion(const NonlocalOperator& linearized, const EigenOptions& eigen = {},
                                  double threshold = 1e-9);

struct SubsolutionOptions {
    int n = 20;            // bump radius 1/n around the maximizer of the linear coefficient
    double epsilon = 0.01;
    int max_halvings = 40;
    EigenOptions eigen;
};

struct Subsolution {
    Eigen::VectorXd values; // epsilon * phi_n
    double epsilon = 0.0;
    int halvings = 0;
    double lambda_n = 0.0;  // principal eigenvalue of the perturbed linearization
};

// epsilon * phi_n with phi_n the Perron vector of the linearization whose
// coefficient is raised to its maximum on a bump around the arg max.
Subsolution build_subsolution(const NonlocalOperator& op, const KPPNonlinearity& f,
                              const SubsolutionOptions& options = {});

enum class StartSide { automatic, subsolution, supersolution };

struct SteadyOptions {
    std::optional<double> k; // resolvent shift; computed when unset
    double tol = 1e-10;      // on the residual |A p + f(p)|_inf
    int max_iter = 100000;
    StartSide start = StartSide::automatic; // automatic: sub unless it is 0
};

struct KPPSolution {
    Eigen::VectorXd p;
    int iterations = 0;
    bool monotone = true;
    double residual = 0.0;
    bool trivial = false;
    double k = 0.0;
    double min_value = 0.0;
    StartSide start = StartSide::subsolution;
};

// Monotone iteration (kI - A) u_{m+1} = k u_m + f(u_m) between ordered bounds.
KPPSolution steady_state(const NonlocalOperator& op, const KPPNonlinearity& f, const Eigen::VectorXd& sub,
                         const Eigen::VectorXd& sup, const SteadyOptions& options = {});

// The state every positive solution tends to: the steady state in the
// persistence regime, 0 otherwise.
Eigen::VectorXd kpp_limit(const NonlocalOperator& op, const KPPNonlinearity& f, const SteadyOptions& steady = {},
                          const SubsolutionOptions& sub = {});

struct UniquenessReport {
    double max_distance = 0.0;
    std::vector<KPPSolution> solutions;
};

UniquenessReport uniqueness_check(const NonlocalOperator& op, const KPPNonlinearity& f,
                                  const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& brackets,
                                  const SteadyOptions& options = {});

enum class Stepper { explicit_euler, imex };
enum class Outcome { converged_to_p, converged_to_0, undecided };

struct EvolveOptions {
    double T = 200.0;
    double dt = 0.0; // 0: stability bound (explicit) or 0.5 (IMEX)
    int checkpoints = 10;
    Stepper stepper = Stepper::explicit_euler;
    double tol = 1e-6;
    std::optional<Eigen::VectorXd> reference; // computed by kpp_limit when unset
};

struct EvolutionTrace {
    std::vector<double> times;
    std::vector<double> dist_to_p;
    std::vector<double> dist_to_0;
    std::vector<double> min_u;
    std::vector<double> max_u;
    Outcome outcome = Outcome::undecided;
    Eigen::VectorXd final_state;
    Eigen::VectorXd reference;
    double dt = 0.0;
    long steps = 0;
};

EvolutionTrace evolve(const NonlocalOperator& op, const KPPNonlinearity& f, const Eigen::VectorXd& u0,
                      const EvolveOptions& options = {});

} // namespace nonlocal

#endif
