// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nonlocal/error.hpp"
#include "nonlocal/maxprinciple.hpp"
#include "nonlocal/reaction.hpp"
#include "oracles.hpp"

using namespace nonlocal;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Result {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const Domain unit_line = Domain::interval(-1.0, 1.0);

double lambda(const NonlocalOperator& op) { return principal_eigenpair(op).lambda_p; }

Result torus_exactness() {
    Result out;
    const Grid grid = build_grid(Domain::interval(0.0, 1.0, Geometry::torus), 64);
    AssemblyOptions opts;
    opts.renormalize = true;
    for (double a0 : {-0.3, 0.0, 0.7}) {
        const auto t0 = Clock::now();
        const double l =
            lambda(assemble(grid, KernelJ::uniform(1, 0.25), DispersalG::constant(1.0), CoefficientA::constant(a0), opts));
        const double dt = seconds_since(t0);
        const double err = std::abs(l + a0 + 1.0);
        out.pass = out.pass && err <= 1e-8 && dt < 1.0;
        out.detail += fmt("a0=%g err=%.1e %.3fs; ", a0, err, dt);
    }
    return out;
}

// Random regular profile on [-1, 1].
struct Profile {
    KernelJ J;
    DispersalG g;
    CoefficientA a;
};

Profile random_profile(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto shape = static_cast<KernelShape>(rng() % 3);
    const double s = 0.1 + 0.3 * u(rng);
    const double slope = 0.4 * (u(rng) - 0.5);
    const double sigma = 2.0 * (u(rng) - 0.5);
    const double c = 0.1 + 2.0 * u(rng);
    const double x0 = 1.6 * (u(rng) - 0.5);
    return {KernelJ::shape(shape, 1, s), DispersalG::affine(1.0, slope, unit_line),
            CoefficientA::quadratic_well(sigma, c, {x0, 0.0})};
}

Eigen::VectorXd random_field(std::mt19937_64& rng, const Grid& grid, double amplitude) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double k = 1.0 + 4.0 * u(rng);
    const double phase = 6.3 * u(rng);
    const double tilt = u(rng) - 0.5;
    return grid.sample([&](const Point& x) { return amplitude * (std::sin(k * x[0] + phase) + tilt * x[0]); });
}

Result proposition_suite() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int N = 128;
    const Grid grid = build_grid(unit_line, N);
    const double h = grid.spacing(0);
    int violations[4] = {0, 0, 0, 0};
    double worst[4] = {-1e300, -1e300, -1e300, -1e300};
    auto record = [&](int clause, double excess) {
        worst[clause] = std::max(worst[clause], excess);
        if (excess > 1e-10)
            ++violations[clause];
    };
    for (int trial = 0; trial < 100; ++trial) {
        // (i) nested boxes on the same lattice: lambda(Omega_1) >= lambda(Omega_2).
        {
            const Profile p = random_profile(rng);
            const int i0 = static_cast<int>(rng() % 40);
            const int i1 = N - 1 - static_cast<int>(rng() % 40);
            const Domain inner = Domain::interval(-1.0 + i0 * h, -1.0 + i1 * h);
            const double big = lambda(assemble(grid, p.J, p.g, p.a));
            const double small = lambda(assemble(build_grid(inner, i1 - i0 + 1), p.J, p.g, p.a));
            record(0, big - small);
        }
        // (ii) a1 >= a2 => lambda(a2) >= lambda(a1); a1 >= a2 + delta => gap transfers.
        {
            const Profile p = random_profile(rng);
            const NonlocalOperator op = assemble(grid, p.J, p.g, p.a);
            const Eigen::VectorXd bump = random_field(rng, grid, 0.5).cwiseAbs();
            const double delta = 0.5 * u(rng);
            const double l1 = lambda(op);
            const double l2 = lambda(op.with_diagonal(op.diagonal() - bump));
            const double l3 = lambda(op.with_diagonal(op.diagonal() - bump - Eigen::VectorXd::Constant(grid.size(), delta)));
            record(1, std::max(l1 - l2, l1 + delta - l3));
        }
        // (iii) |lambda(a) - lambda(b)| <= |a - b|_inf.
        {
            const Profile p = random_profile(rng);
            const NonlocalOperator op = assemble(grid, p.J, p.g, p.a);
            const Eigen::VectorXd b = op.diagonal() + random_field(rng, grid, u(rng));
            const double diff = std::abs(lambda(op) - lambda(op.with_diagonal(b)));
            record(2, diff - (op.diagonal() - b).cwiseAbs().maxCoeff());
        }
        // (iv) J1 <= J2 pointwise => lambda(J1) >= lambda(J2).
        {
            const Profile p = random_profile(rng);
            const double s2 = 0.05 + 0.3 * u(rng);
            const double beta = 0.8 * u(rng);
            const KernelJ extra = KernelJ::cosine_bump(1, s2, beta);
            const KernelJ J1 = p.J;
            const KernelJ J2 = KernelJ::custom(
                1, [J1, extra](const Point& z) { return J1(z) + extra(z); }, std::max(J1.support(), s2),
                J1.declared_mass() + beta);
            record(3, lambda(assemble(grid, J2, p.g, p.a)) - lambda(assemble(grid, J1, p.g, p.a)));
        }
    }
    const double dt = seconds_since(t0);
    Result out;
    out.pass = dt < 120.0;
    const char* names[4] = {"domain", "coefficient", "Lipschitz", "kernel"};
    for (int k = 0; k < 4; ++k) {
        out.pass = out.pass && violations[k] == 0;
        out.detail += fmt("(%s) %d/100 violations, worst excess %.1e; ", names[k], violations[k], worst[k]);
    }
    out.detail += fmt("%.1fs", dt);
    return out;
}

NonlocalOperator quadratic_well(int N) {
    return assemble(build_grid(unit_line, N), KernelJ::triangular(1, 0.2), DispersalG::constant(1.0),
                    CoefficientA::quadratic_well(0.0, 1.0));
}

Result sandwich() {
    Result out;
    std::vector<double> gaps;
    double lambda512 = 0.0;
    for (int N : {64, 128, 256, 512}) {
        const NonlocalOperator op = quadratic_well(N);
        const double l = lambda(op);
        const Sigmas s = sigma_and_sigma_prime(op);
        out.pass = out.pass && -s.sigma_prime < l && l < -s.sigma;
        gaps.push_back(-s.sigma - l);
        out.detail += fmt("N=%d %.6f in (%.6f, %.6f); ", N, l, -s.sigma_prime, -s.sigma);
        if (N == 512)
            lambda512 = l;
    }
    const auto [lo, hi] = std::minmax_element(gaps.begin(), gaps.end());
    const double spread = (*hi - *lo) / *lo;
    const double dense_err = std::abs(oracle::dense_lambda(quadratic_well(512).matrix()) - lambda512);
    out.pass = out.pass && spread < 0.20 && dense_err <= 1e-8;
    out.detail += fmt("gap spread %.2f%%, dense oracle diff %.1e", 100.0 * spread, dense_err);
    return out;
}

Result counterexample() {
    Result out;
    // int_{-1}^{1} |x|^{-1/2} dx = 2 [2 sqrt(x)]_0^1.
    const double condition = 0.2 * 2.0 * (2.0 * std::sqrt(1.0) - 2.0 * std::sqrt(0.0));
    out.pass = condition < 1.0;
    out.detail = fmt("rho*int 1/(sigma-a) = %.3f; ", condition);
    const CoefficientA root = CoefficientA::power_contact(0.0, 0.5, 1.0);
    const auto diag = existence_diagnostic([&](int N) { return rank_one_operator(build_grid(unit_line, N), 0.2, root); },
                                           {128, 256, 512, 1024, 2048});
    for (std::size_t k = 0; k < diag.levels.size(); ++k) {
        const auto& l = diag.levels[k];
        out.detail += fmt("N=%d lambda=%.5f rho_h=%.2f", l.N, l.lambda_p, l.concentration);
        if (k > 0) {
            const double growth = l.concentration / diag.levels[k - 1].concentration;
            out.pass = out.pass && growth >= 1.5 && std::abs(l.lambda_p - l.sigma) < std::abs(diag.levels[k - 1].lambda_p - diag.levels[k - 1].sigma);
            out.detail += fmt(" (x%.2f)", growth);
        }
        out.detail += "; ";
    }
    const CoefficientA well = CoefficientA::quadratic_well(0.0, 1.0);
    const auto contrast = existence_diagnostic(
        [&](int N) { return rank_one_operator(build_grid(unit_line, N), 0.2, well); }, {128, 256, 512, 1024, 2048});
    double lo = 1e300;
    double hi = 0.0;
    for (const auto& l : contrast.levels) {
        lo = std::min(lo, l.concentration);
        hi = std::max(hi, l.concentration);
    }
    out.pass = out.pass && diag.verdict == ExistenceVerdict::degenerate && (hi - lo) <= 0.10 * lo;
    out.detail += fmt("contrast a=-x^2 rho_h spread %.2f%%", 100.0 * (hi - lo) / lo);
    return out;
}

Result bisection() {
    const Grid grid = build_grid(unit_line, 2048);
    const CoefficientA a_bar = CoefficientA::quadratic_well(1.0, 1.0);
    const RankOneRoot root = rank_one_bisection(a_bar, 1.0, grid);
    const double dense = lambda(rank_one_operator(grid, 1.0, a_bar));
    const double scalar = oracle::closed_form_root();
    Result out;
    out.pass = std::abs(root.F - 1.0) <= 1e-8 && std::abs(root.lambda - dense) <= 1e-6 && std::abs(scalar + 2.705) <= 0.01;
    out.detail = fmt("lambda1=%.10f |F-1|=%.1e dense=%.10f diff=%.1e closed-form=%.10f", root.lambda,
                     std::abs(root.F - 1.0), dense, std::abs(root.lambda - dense), scalar);
    return out;
}

Result mp_equivalence() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int agree = 0;
    int witnesses_ok = 0;
    int witnesses = 0;
    int inverse_ok = 0;
    int holds = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Profile p = random_profile(rng);
        const int N = 64 + static_cast<int>(rng() % 193);
        const NonlocalOperator base = assemble(build_grid(unit_line, N), p.J, p.g, p.a);
        // lambda_p(a + t) = lambda_p(a) - t, so a shift places lambda_p at the target.
        const double target = (trial % 2 ? 1.0 : -1.0) * (0.1 + 0.5 * u(rng));
        const double t = lambda(base) - target;
        const NonlocalOperator op = base.with_diagonal(base.diagonal() + Eigen::VectorXd::Constant(base.size(), t));
        const double sign_oracle = oracle::dense_lambda(op.matrix());
        MPOptions opts;
        opts.seed = static_cast<std::uint64_t>(trial);
        const MPReport r = check_mp(op, opts);
        const bool expect_holds = sign_oracle > 0.0;
        agree += (r.verdict == MPVerdict::holds) == expect_holds;
        if (r.verdict == MPVerdict::violated) {
            ++witnesses;
            witnesses_ok += r.witness && verify_witness(op, *r.witness).sound;
        } else {
            ++holds;
            inverse_ok += r.inverse_min && *r.inverse_min >= -1e-12;
        }
    }
    Result out;
    out.pass = agree == 20 && witnesses_ok == witnesses && inverse_ok == holds && witnesses > 0 && holds > 0;
    out.detail = fmt("verdict agrees %d/20; witnesses sound %d/%d; inverse nonnegative %d/%d", agree, witnesses_ok,
                     witnesses, inverse_ok, holds);
    return out;
}

Result kpp_dichotomy() {
    Result out;
    const NonlocalOperator torus = assemble(build_grid(Domain::interval(-1.0, 1.0, Geometry::torus), 64),
                                            KernelJ::uniform(1, 0.25), DispersalG::constant(1.0), CoefficientA::constant(-1.0));
    const auto n = torus.size();
    auto c = [n](double v) { return Eigen::VectorXd::Constant(n, v); };
    const KPPNonlinearity grow = KPPNonlinearity::logistic(0.4);
    const UniquenessReport uniq = uniqueness_check(torus, grow, {{c(0.01), c(1.0)}, {c(0.3), c(2.0)}, {c(0.05), c(5.0)}});
    double to_mu = 0.0;
    for (const auto& s : uniq.solutions)
        to_mu = std::max(to_mu, (s.p.array() - 0.4).abs().maxCoeff());
    EvolveOptions ev;
    ev.T = 200.0;
    const EvolutionTrace up = evolve(torus, grow, c(0.1), ev);
    const EvolutionTrace down = evolve(torus, KPPNonlinearity::logistic(-0.2), c(0.1), ev);
    out.pass = to_mu <= 1e-8 && uniq.max_distance <= 1e-8 && up.dist_to_p.back() <= 1e-6 && down.max_u.back() <= 1e-6;
    out.detail = fmt("torus |p-0.4|=%.1e pairwise=%.1e dist(T)=%.1e decay=%.1e; ", to_mu, uniq.max_distance,
                     up.dist_to_p.back(), down.max_u.back());

    const NonlocalOperator line = assemble(build_grid(unit_line, 128), KernelJ::triangular(1, 0.2),
                                           DispersalG::constant(1.0), CoefficientA::constant(-1.0));
    const KPPNonlinearity het = KPPNonlinearity::logistic(0.4, 0.3);
    const Eigen::VectorXd p = kpp_limit(line, het);
    EvolveOptions long_run;
    long_run.T = 400.0;
    long_run.stepper = Stepper::imex;
    const EvolutionTrace het_trace = evolve(line, het, Eigen::VectorXd::Constant(line.size(), 0.1), long_run);
    const double het_diff = (het_trace.final_state - p).cwiseAbs().maxCoeff();
    out.pass = out.pass && het_diff <= 1e-5;
    out.detail += fmt("heterogeneous steady/evolve diff=%.1e; ", het_diff);

    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int predicted = 0;
    int tried = 0;
    while (tried < 10) {
        const double mu0 = 1.2 * (u(rng) - 0.4);
        const double mu2 = 0.6 * u(rng);
        const KPPNonlinearity f = KPPNonlinearity::logistic(mu0, mu2);
        const SurvivalReport survival = survival_criterion(linearization(line, f));
        if (std::abs(survival.lambda_p) < 0.1)
            continue;
        ++tried;
        const EvolutionTrace tr = evolve(line, f, Eigen::VectorXd::Constant(line.size(), 0.1), long_run);
        const bool ok = survival.verdict == Survival::persistence ? tr.outcome == nonlocal::Outcome::converged_to_p
                                                                  : tr.outcome == nonlocal::Outcome::converged_to_0;
        predicted += ok;
    }
    out.pass = out.pass && predicted == 10;
    out.detail += fmt("sign of lambda_p predicts outcome %d/10", predicted);
    return out;
}

Result exhaustion() {
    const UnboundedLine line{{-1.0, 1.0}, {2.0, 3.0, 4.0, 5.0, 6.0, 7.0}};
    const ExhaustionResult r = exhaustion_lambda(line, KernelJ::triangular(1, 0.5), DispersalG::constant(1.0),
                                                 CoefficientA::saturating_well(0.0, 1.0), 6, 1.0 / 64.0);
    Result out;
    out.pass = r.final_increment < 1e-4;
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
        if (k > 0)
            out.pass = out.pass && r.levels[k].lambda_p <= r.levels[k - 1].lambda_p + 1e-10;
        out.detail += fmt("k=%zu %.10f; ", k + 1, r.levels[k].lambda_p);
    }
    out.detail += fmt("final increment %.1e", r.final_increment);
    return out;
}

Result harnack() {
    Result out;
    std::vector<double> ratios;
    for (int N : {128, 256, 512}) {
        const NonlocalOperator op = quadratic_well(N);
        ratios.push_back(harnack_ratio(op, principal_eigenpair(op).eigenvector, Domain::interval(-0.5, 0.5)));
        out.detail += fmt("N=%d ratio=%.6f; ", N, ratios.back());
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    out.pass = (*hi - *lo) <= 0.10 * *lo;
    out.detail += fmt("spread %.3f%%", 100.0 * (*hi - *lo) / *lo);
    return out;
}

Result degenerate_mode() {
    const KernelJ J = KernelJ::triangular(1, 0.5);
    const DispersalG g = DispersalG::power_degenerate(0.5, 1.0);
    const CoefficientA a = CoefficientA::plateau(0.0, 0.2, 1.0, 2.0);
    AssemblyOptions opts;
    opts.exclude_degenerate = true;
    Result out;
    std::vector<double> lambdas;
    for (int N : {65, 129, 257, 513}) {
        const NonlocalOperator op = assemble(build_grid(unit_line, N), J, g, a, opts);
        const EigenReport r = principal_eigenpair(op);
        bool positive = true;
        for (Eigen::Index i = 0; i < op.size(); ++i)
            positive = positive && (op.is_excluded(i) || r.eigenvector[i] > 0.0);
        out.pass = out.pass && r.lambda_p < -a.sigma() && positive;
        lambdas.push_back(r.lambda_p);
        out.detail += fmt("N=%d lambda=%.6f; ", N, r.lambda_p);
    }
    const double drift = std::abs(lambdas[3] - lambdas[2]);
    out.pass = out.pass && drift <= 1e-3;
    out.detail += fmt("last-two drift %.2e (limit 1e-3); finer levels, not scored:", drift);
    for (int N : {1025, 2049})
        out.detail += fmt(" N=%d lambda=%.6f", N, lambda(assemble(build_grid(unit_line, N), J, g, a, opts)));
    return out;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
        {"torus constant-coefficient exactness", torus_exactness},
        {"monotonicity and Lipschitz suite", proposition_suite},
        {"sandwich for a = -x^2", sandwich},
        {"rank-one concentration signature", counterexample},
        {"rank-one bisection", bisection},
        {"maximum principle equivalence", mp_equivalence},
        {"KPP survival/extinction dichotomy", kpp_dichotomy},
        {"exhaustion of the line", exhaustion},
        {"Harnack ratio stability", harnack},
        {"degenerate dispersal mode", degenerate_mode},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Result o;
        const auto t0 = Clock::now();
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("criterion %zu %s: %s [%.1fs] %s\n", k + 1, criteria[k].first, o.pass ? "PASS" : "FAIL",
                    seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed ? 1 : 0;
}
