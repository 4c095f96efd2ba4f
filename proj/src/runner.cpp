#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nonlocal/error.hpp"
#include "nonlocal/maxprinciple.hpp"
#include "nonlocal/scenario.hpp"

namespace nonlocal {

std::string_view tool_version() { return "0.1.0"; }

namespace {

std::string fixed(double v, int digits = 9) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string_view integrability_name(Integrability c) {
    switch (c) {
    case Integrability::non_integrable: return "non-integrable";
    case Integrability::integrable: return "integrable";
    case Integrability::plateau: return "plateau";
    }
    return "?";
}

std::string_view verdict_name(ExistenceVerdict v) {
    switch (v) {
    case ExistenceVerdict::exists: return "eigenfunction-exists";
    case ExistenceVerdict::degenerate: return "degenerate";
    case ExistenceVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string_view survival_name(Survival s) {
    switch (s) {
    case Survival::persistence: return "persistence";
    case Survival::extinction: return "extinction";
    case Survival::borderline: return "borderline";
    }
    return "?";
}

std::string_view outcome_name(Outcome o) {
    switch (o) {
    case Outcome::converged_to_p: return "converged-to-p";
    case Outcome::converged_to_0: return "converged-to-0";
    case Outcome::undecided: return "undecided";
    }
    return "?";
}

// The bound -sigma' < lambda_p < -sigma applies when 1/(sigma - a) is not integrable.
bool sandwich_applies(const CoefficientA& a, int dim) {
    const Integrability c = integrability_classifier(a, dim);
    return c != Integrability::integrable;
}

bool in_sandwich(double lambda, double sigma, double sigma_prime) {
    return -sigma_prime - 1e-8 < lambda && lambda < -sigma + 1e-8;
}

Table node_table(const Grid& grid, const std::string& name, const std::string& column, const Eigen::VectorXd& v) {
    Table t;
    t.name = name;
    t.header = grid.dimension() == 1 ? std::vector<std::string>{"x", column}
                                     : std::vector<std::string>{"x", "y", column};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point& x = grid.node(i);
        if (grid.dimension() == 1)
            t.rows.push_back({x[0], v[static_cast<Eigen::Index>(i)]});
        else
            t.rows.push_back({x[0], x[1], v[static_cast<Eigen::Index>(i)]});
    }
    return t;
}

Table ladder_table(const std::vector<LadderLevel>& levels) {
    Table t;
    t.name = "ladder";
    t.header = {"N", "h", "lambda_p", "sigma", "sigma_prime", "concentration_ratio"};
    for (const auto& l : levels)
        t.rows.push_back({static_cast<double>(l.N), l.h, l.lambda_p, l.sigma, l.sigma_prime, l.concentration});
    return t;
}

void run_eigen(const ScenarioConfig& c, RunReport& r) {
    const Domain domain = make_domain(c);
    const Grid grid = build_grid(domain, *c.grid.N);
    const CoefficientA a = make_coefficient(c);
    const NonlocalOperator op = assemble(grid, make_kernel(c), make_dispersal(c, domain), a, make_assembly(c));
    const EigenReport eig = principal_eigenpair(op, make_eigen(c));
    const Sigmas s = sigma_and_sigma_prime(op);
    r.lines.push_back("lambda_p = " + fixed(eig.lambda_p));
    r.lines.push_back("Collatz-Wielandt bracket on rho(A + kI) = [" + fixed(eig.cw_lower, 12) + ", " +
                      fixed(eig.cw_upper, 12) + "], k = " + fixed(eig.shift, 6));
    r.lines.push_back("iterations = " + std::to_string(eig.iterations) + ", residual = " + sci(eig.residual));
    r.lines.push_back("sigma = " + fixed(s.sigma) + ", sigma' = " + fixed(s.sigma_prime));
    r.lines.push_back("concentration ratio = " + fixed(eig.concentration, 6));
    r.lines.push_back("integrability of 1/(sigma - a): " +
                      std::string(integrability_name(integrability_classifier(a, grid.dimension()))));
    r.verdicts.push_back({"residual <= tol", eig.residual <= c.solver.tol, sci(eig.residual)});
    bool positive = true;
    for (Eigen::Index i = 0; i < op.size(); ++i)
        positive = positive && (op.is_excluded(i) || eig.eigenvector[i] > 0.0);
    r.verdicts.push_back({"eigenvector positive on kept nodes", positive, ""});
    if (sandwich_applies(a, grid.dimension()))
        r.verdicts.push_back({"sandwich -sigma' < lambda_p < -sigma", in_sandwich(eig.lambda_p, s.sigma, s.sigma_prime),
                              fixed(-s.sigma_prime) + " < " + fixed(eig.lambda_p) + " < " + fixed(-s.sigma)});
    r.tables.push_back(node_table(grid, "eigenvector", "phi", eig.eigenvector));
}

void run_ladder(const ScenarioConfig& c, RunReport& r) {
    const Domain domain = make_domain(c);
    const KernelJ J = make_kernel(c);
    const DispersalG g = make_dispersal(c, domain);
    const CoefficientA a = make_coefficient(c);
    const AssemblyOptions assembly = make_assembly(c);
    const auto diag = existence_diagnostic(
        [&](int N) { return assemble(build_grid(domain, N), J, g, a, assembly); }, c.grid.ladder, make_eigen(c));
    const Integrability cls = integrability_classifier(a, domain.dimension());
    r.lines.push_back("integrability of 1/(sigma - a): " + std::string(integrability_name(cls)));
    r.lines.push_back("existence verdict: " + std::string(verdict_name(diag.verdict)));
    for (const auto& l : diag.levels)
        r.lines.push_back("N = " + std::to_string(l.N) + ": lambda_p = " + fixed(l.lambda_p) +
                          ", gap -sigma - lambda_p = " + fixed(-l.sigma - l.lambda_p));
    if (cls != Integrability::integrable) {
        bool all = true;
        for (const auto& l : diag.levels)
            all = all && in_sandwich(l.lambda_p, l.sigma, l.sigma_prime);
        r.verdicts.push_back({"sandwich -sigma' < lambda_p < -sigma at every level", all, ""});
        r.verdicts.push_back({"eigenfunction exists under refinement", diag.verdict == ExistenceVerdict::exists,
                              std::string(verdict_name(diag.verdict))});
    }
    r.tables.push_back(ladder_table(diag.levels));
}

void run_rankone(const ScenarioConfig& c, RunReport& r) {
    const Domain domain = make_domain(c);
    const CoefficientA a = make_coefficient(c);
    const double rho = c.rankone->rho;
    const auto diag = existence_diagnostic([&](int N) { return rank_one_operator(build_grid(domain, N), rho, a); },
                                           c.grid.ladder, make_eigen(c));
    r.lines.push_back("existence verdict: " + std::string(verdict_name(diag.verdict)));
    for (std::size_t k = 1; k < diag.levels.size(); ++k)
        r.lines.push_back("concentration growth N = " + std::to_string(diag.levels[k - 1].N) + " -> " +
                          std::to_string(diag.levels[k].N) + ": x" +
                          fixed(diag.levels[k].concentration / diag.levels[k - 1].concentration, 3));
    const Grid finest = build_grid(domain, c.grid.ladder.back());
    try {
        const RankOneRoot root = rank_one_bisection(a, rho, finest);
        r.lines.push_back("F(lambda) = 1 at lambda_1 = " + fixed(root.lambda, 12) + " (|F - 1| = " +
                          sci(std::abs(root.F - 1.0)) + ")");
        const double finest_lambda = diag.levels.back().lambda_p;
        r.verdicts.push_back({"bisection root matches the Perron eigenvalue",
                              std::abs(root.lambda - finest_lambda) <= 1e-6,
                              sci(std::abs(root.lambda - finest_lambda))});
    } catch (const CriterionFailure& e) {
        r.lines.push_back("F(lambda) < 1 up to the resolved spectrum edge (limit value " + fixed(e.limit_value(), 6) +
                          "): no eigenfunction in the continuum limit");
        r.verdicts.push_back({"concentration signature of a missing eigenfunction",
                              diag.verdict == ExistenceVerdict::degenerate, std::string(verdict_name(diag.verdict))});
    }
    r.tables.push_back(ladder_table(diag.levels));
}

void run_mp(const ScenarioConfig& c, RunReport& r) {
    const Domain domain = make_domain(c);
    const Grid grid = build_grid(domain, *c.grid.N);
    const NonlocalOperator op =
        assemble(grid, make_kernel(c), make_dispersal(c, domain), make_coefficient(c), make_assembly(c));
    MPOptions options;
    options.battery = c.solver.battery;
    options.seed = c.solver.seed;
    options.cutoff_margin = c.solver.cutoff_margin;
    options.eigen = make_eigen(c);
    const MPReport mp = check_mp(op, options);
    r.lines.push_back("lambda_p = " + fixed(mp.lambda_p));
    r.lines.push_back(std::string("maximum principle: ") + (mp.verdict == MPVerdict::holds ? "holds" : "violated"));
    if (mp.verdict == MPVerdict::holds) {
        r.lines.push_back("battery: " + std::to_string(mp.battery_size) + " solves, min entry " + sci(mp.battery_min));
        r.verdicts.push_back({"battery solutions nonnegative", mp.battery_min >= -1e-10, sci(mp.battery_min)});
        if (mp.inverse_min)
            r.verdicts.push_back(
                {"interior inverse entrywise nonnegative", *mp.inverse_min >= -1e-12, sci(*mp.inverse_min)});
        Table t;
        t.name = "battery";
        t.header = {"item", "min_u"};
        for (std::size_t i = 0; i < mp.battery_mins.size(); ++i)
            t.rows.push_back({static_cast<double>(i), mp.battery_mins[i]});
        r.tables.push_back(std::move(t));
    } else {
        const WitnessCheck w = verify_witness(op, *mp.witness);
        r.lines.push_back("witness: max interior (Mw) = " + sci(w.max_interior) + ", min boundary w = " +
                          sci(w.min_boundary) + ", min w = " + sci(w.min_value));
        r.verdicts.push_back({"witness violates the maximum principle", w.sound, ""});
        r.tables.push_back(node_table(grid, "witness", "w", *mp.witness));
    }
}

SteadyOptions steady_options(const ScenarioConfig& c) {
    SteadyOptions o;
    o.k = c.solver.k;
    o.tol = c.solver.tol;
    o.max_iter = c.solver.max_iter;
    return o;
}

SubsolutionOptions sub_options(const ScenarioConfig& c) {
    SubsolutionOptions o;
    o.n = c.solver.subsolution_n;
    o.epsilon = c.solver.epsilon;
    o.eigen = make_eigen(c);
    return o;
}

void note_hypothesis(const NonlocalOperator& op, RunReport& r) {
    if (op.diagonal().maxCoeff() > 0.0)
        r.lines.push_back("note: a > 0 somewhere; the survival criterion is stated for a <= 0");
}

void run_kpp(const ScenarioConfig& c, RunReport& r) {
    const Domain domain = make_domain(c);
    const Grid grid = build_grid(domain, *c.grid.N);
    const NonlocalOperator op =
        assemble(grid, make_kernel(c), make_dispersal(c, domain), make_coefficient(c), make_assembly(c));
    const KPPNonlinearity f = make_nonlinearity(c);
    note_hypothesis(op, r);
    const SurvivalReport survival = survival_criterion(linearization(op, f), make_eigen(c));
    r.lines.push_back(std::string(survival_name(survival.verdict)) + " (lambda_p = " + fixed(survival.lambda_p, 3) +
                      ")");
    if (survival.verdict == Survival::borderline)
        return;
    const auto m = op.size();
    const Eigen::VectorXd sup = Eigen::VectorXd::Constant(m, 2.0 * f.saturation());
    const SteadyOptions opts = steady_options(c);
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> brackets;
    if (survival.verdict == Survival::persistence) {
        const Subsolution sub = build_subsolution(op, f, sub_options(c));
        r.lines.push_back("subsolution epsilon = " + sci(sub.epsilon));
        brackets.emplace_back(sub.values, sup);
        brackets.emplace_back(0.5 * sub.values, 2.0 * sup);
    } else {
        brackets.emplace_back(Eigen::VectorXd::Zero(m), sup);
        brackets.emplace_back(Eigen::VectorXd::Zero(m), 2.0 * sup);
    }
    const UniquenessReport uniq = uniqueness_check(op, f, brackets, opts);
    const KPPSolution& p = uniq.solutions.front();
    r.lines.push_back("steady state: " + std::to_string(p.iterations) + " iterations, k = " + fixed(p.k, 6) +
                      ", residual = " + sci(p.residual) + ", min p = " + fixed(p.min_value) +
                      ", max p = " + fixed(p.p.maxCoeff()));
    r.lines.push_back("max distance between bracket solutions = " + sci(uniq.max_distance));
    r.verdicts.push_back({"steady-state residual <= tol", p.residual <= c.solver.tol, sci(p.residual)});
    r.verdicts.push_back({"unique steady state", uniq.max_distance <= 1e-8, sci(uniq.max_distance)});
    if (survival.verdict == Survival::persistence)
        r.verdicts.push_back({"positive steady state under persistence", p.min_value > 0.0, fixed(p.min_value)});
    else
        r.verdicts.push_back({"trivial steady state under extinction", p.trivial, sci(p.p.cwiseAbs().maxCoeff())});
    r.tables.push_back(node_table(grid, "steady_state", "p", p.p));
}

void run_evolve(const ScenarioConfig& c, RunReport& r) {
    const Domain domain = make_domain(c);
    const Grid grid = build_grid(domain, *c.grid.N);
    const NonlocalOperator op =
        assemble(grid, make_kernel(c), make_dispersal(c, domain), make_coefficient(c), make_assembly(c));
    const KPPNonlinearity f = make_nonlinearity(c);
    note_hypothesis(op, r);
    const SurvivalReport survival = survival_criterion(linearization(op, f), make_eigen(c));
    EvolveOptions opts;
    opts.T = c.solver.T;
    opts.dt = c.solver.dt.value_or(0.0);
    opts.checkpoints = c.solver.checkpoints;
    opts.stepper = c.solver.stepper;
    opts.tol = c.solver.evolve_tol;
    opts.reference = kpp_limit(op, f, steady_options(c), sub_options(c));
    const EvolutionTrace trace = evolve(op, f, Eigen::VectorXd::Constant(op.size(), c.solver.u0), opts);
    r.lines.push_back(std::string(survival_name(survival.verdict)) + " (lambda_p = " + fixed(survival.lambda_p, 3) +
                      ")");
    r.lines.push_back("dt = " + sci(trace.dt) + ", steps = " + std::to_string(trace.steps));
    r.lines.push_back("outcome at T = " + fixed(c.solver.T, 3) + ": " + std::string(outcome_name(trace.outcome)));
    if (survival.verdict == Survival::persistence)
        r.verdicts.push_back({"solution converges to the positive steady state",
                              trace.outcome == Outcome::converged_to_p, std::string(outcome_name(trace.outcome))});
    else if (survival.verdict == Survival::extinction)
        r.verdicts.push_back({"solution goes extinct", trace.outcome == Outcome::converged_to_0,
                              std::string(outcome_name(trace.outcome))});
    Table t;
    t.name = "evolution";
    t.header = {"t", "sup_dist_to_p", "sup_dist_to_0", "min_u", "max_u"};
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        t.rows.push_back({trace.times[k], trace.dist_to_p[k], trace.dist_to_0[k], trace.min_u[k], trace.max_u[k]});
    r.tables.push_back(std::move(t));
}

void run_exhaustion(const ScenarioConfig& c, RunReport& r) {
    const auto& e = *c.exhaustion;
    const UnboundedLine line{Interval{e.core[0], e.core[1]}, e.radii};
    const Domain first = exhaustion_sequence(line, e.radii.size()).front();
    const ExhaustionResult res =
        exhaustion_lambda(line, make_kernel(c), make_dispersal(c, first), make_coefficient(c), e.radii.size(), e.h,
                          make_assembly(c), make_eigen(c));
    r.lines.push_back("limit estimate lambda = " + fixed(res.limit) + ", final increment = " +
                      sci(res.final_increment));
    r.verdicts.push_back({"lambda_p non-increasing along the exhaustion", true, ""});
    r.verdicts.push_back({"limit inside (-sigma', -sigma)", res.in_bracket, ""});
    Table t;
    t.name = "exhaustion";
    t.header = {"k", "R", "N", "lambda_p", "sigma", "sigma_prime"};
    for (std::size_t k = 0; k < res.levels.size(); ++k) {
        const auto& l = res.levels[k];
        t.rows.push_back({static_cast<double>(k + 1), e.radii[k], static_cast<double>(l.N), l.lambda_p,
                          l.sigma, l.sigma_prime});
    }
    r.tables.push_back(std::move(t));
}

} // namespace

bool RunReport::passed() const {
    if (error)
        return false;
    for (const auto& v : verdicts)
        if (!v.pass)
            return false;
    return true;
}

std::string RunReport::text() const {
    std::ostringstream out;
    out << "scenario: " << scenario << " (" << kind_name(kind) << ")\n";
    out << "tool version: " << version << "\n";
    out << "wall clock: " << fixed(wall_clock, 3) << " s\n\n";
    for (const auto& line : lines)
        out << line << "\n";
    if (error)
        out << "error: " << *error << "\n";
    out << "\nverdicts:\n";
    for (const auto& v : verdicts) {
        out << "  " << v.name << ": " << (v.pass ? "PASS" : "FAIL");
        if (!v.detail.empty())
            out << " (" << v.detail << ")";
        out << "\n";
    }
    out << "\n# scenario echo\n" << echo;
    return out.str();
}

RunReport run(const ScenarioConfig& config) {
    RunReport r;
    r.scenario = config.name;
    r.kind = config.kind;
    r.echo = to_toml(config);
    r.version = std::string(tool_version());
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (config.kind) {
        case ExperimentKind::eigen: run_eigen(config, r); break;
        case ExperimentKind::ladder: run_ladder(config, r); break;
        case ExperimentKind::rankone: run_rankone(config, r); break;
        case ExperimentKind::mp: run_mp(config, r); break;
        case ExperimentKind::kpp: run_kpp(config, r); break;
        case ExperimentKind::evolve: run_evolve(config, r); break;
        case ExperimentKind::exhaustion: run_exhaustion(config, r); break;
        }
    } catch (const Error& e) {
        r.error = "scenario '" + config.name + "': " + e.what();
        r.verdicts.push_back({"run completed", false, e.what()});
    }
    r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::string csv_text(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out += (i ? "," : "") + table.header[i];
    out += "\n";
    char buf[64];
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out += (i ? "," : "");
            out += buf;
        }
        out += "\n";
    }
    return out;
}

void emit_csv(const Table& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << csv_text(table);
    if (!out)
        throw Error("write failed for " + path.string());
}

} // namespace nonlocal
