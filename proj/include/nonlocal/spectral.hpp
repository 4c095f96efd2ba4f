#ifndef NONLOCAL_SPECTRAL_HPP
#define NONLOCAL_SPECTRAL_HPP

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nonlocal/operator.hpp"

namespace nonlocal {

struct EigenOptions {
    double tol = 1e-10; // width of the Collatz-Wielandt bracket
    int max_iter = 100000;
    int burn_in = 50;   // iterations before zero entries count as reducibility
};

/// Principal eigenpair of A = K + diag(a), with sign convention
/// A phi + lambda_p phi = 0.
struct EigenReport {
    double lambda_p = 0.0;
    Eigen::VectorXd eigenvector; // sup = 1
    double cw_lower = 0.0;       // bounds on the spectral radius of A + kI
    double cw_upper = 0.0;
    double shift = 0.0;          // k
    int iterations = 0;
    double residual = 0.0;       // |A phi + lambda_p phi|_inf
    std::vector<double> bracket_history;
    double concentration = 0.0;  // sup phi / int phi dmu
    std::vector<std::size_t> peak_nodes; // nodes where a attains its maximum
};

// (min_i (A phi)_i / phi_i, max_i (A phi)_i / phi_i). phi must be positive.
std::pair<double, double> cw_bracket(const Eigen::MatrixXd& A, const Eigen::VectorXd& phi);

// Power iteration on A + kI, k = |a|_inf + |c|_inf + 1.
EigenReport principal_eigenpair(const NonlocalOperator& op, const EigenOptions& options = {});

// True when the pattern of K is strongly connected on the kept nodes and every
// excluded node receives mass from some kept node.
bool is_irreducible(const NonlocalOperator& op);

double concentration_ratio(const NonlocalOperator& op, const Eigen::VectorXd& phi);

enum class Integrability { non_integrable, integrable, plateau };

// Whether 1/(sigma - a) fails to be integrable near the maximum set in R^n.
Integrability integrability_classifier(const CoefficientA& a, int dimension);

struct LadderLevel {
    int N = 0;
    double h = 0.0;
    double lambda_p = 0.0;
    double sigma = 0.0;
    double sigma_prime = 0.0;
    double concentration = 0.0;
    int iterations = 0;
};

enum class ExistenceVerdict { exists, degenerate, inconclusive };

struct DiagnosticOptions {
    double ratio_stability = 0.10; // last two concentration ratios within this fraction
    double gap_stability = 0.20;   // last two gaps -sigma - lambda_p within this fraction
    double growth = 1.5;           // concentration growth per doubling for "degenerate"
};

struct ExistenceDiagnostic {
    std::vector<LadderLevel> levels;
    ExistenceVerdict verdict = ExistenceVerdict::inconclusive;
};

using OperatorBuilder = std::function<NonlocalOperator(int N)>;

// Solves on each rung of a doubling ladder (N_{k+1} = 2N_k or 2N_k - 1) and
// classifies the refinement trend.
ExistenceDiagnostic existence_diagnostic(const OperatorBuilder& build, const std::vector<int>& ladder,
                                         const EigenOptions& eigen = {}, const DiagnosticOptions& options = {});

ExistenceVerdict classify_ladder(const std::vector<LadderLevel>& levels, const DiagnosticOptions& options = {});

// K[i][j] = rho * w_j; diagonal a(x_i). Bounded domains only.
NonlocalOperator rank_one_operator(const Grid& grid, double rho, const CoefficientA& a);
NonlocalOperator rank_one_operator(const Grid& grid, double rho, const Eigen::VectorXd& a_values);

struct BisectionOptions {
    double tol = 1e-12;  // on |F(lambda) - 1|
    int max_expand = 200;
    int max_bisect = 400;
};

struct RankOneRoot {
    double lambda = 0.0;
    double F = 0.0;
    Eigen::VectorXd phi; // c0 / (-lambda - a_bar(x_i))
    int iterations = 0;
};

// Root of F(lambda) = sum_j dmu_j c0 / (-lambda - a_bar_j) = 1 below -max a_bar.
// The search never approaches -max a_bar closer than the smallest positive
// gap max a_bar - a_bar_j; CriterionFailure if F stays below 1 there.
RankOneRoot rank_one_bisection(const CoefficientA& a_bar, double c0, const Grid& grid,
                               const BisectionOptions& options = {});
RankOneRoot rank_one_bisection(const Eigen::VectorXd& a_bar, const Eigen::VectorXd& dmu, double c0,
                               const BisectionOptions& options = {});

struct ExhaustionLevel {
    Domain domain;
    int N = 0;
    double lambda_p = 0.0;
    double sigma = 0.0;
    double sigma_prime = 0.0;
};

struct ExhaustionResult {
    std::vector<ExhaustionLevel> levels;
    double limit = 0.0;           // last lambda_p
    double final_increment = 0.0; // lambda_{m-1} - lambda_m
    bool in_bracket = false;      // -sigma' < limit < -sigma on the last level
};

// Fixed spacing h on every window; 2 R_k / h must be an integer.
ExhaustionResult exhaustion_lambda(const UnboundedLine& line, const KernelJ& J, const DispersalG& g,
                                   const CoefficientA& a, std::size_t levels, double h,
                                   const AssemblyOptions& assembly = {}, const EigenOptions& eigen = {});

// max phi / min phi over the nodes of a box compactly inside the domain.
double harnack_ratio(const NonlocalOperator& op, const Eigen::VectorXd& phi, const Domain& inner);

} // namespace nonlocal

#endif
