#ifndef NONLOCAL_SCENARIO_HPP
#define NONLOCAL_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nonlocal/reaction.hpp"

namespace nonlocal {

enum class ExperimentKind { eigen, ladder, mp, kpp, evolve, exhaustion, rankone };

struct DomainSpec {
    int dim = 1;
    std::vector<double> lower{-1.0};
    std::vector<double> upper{1.0};
    Geometry geometry = Geometry::bounded;
    friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

struct GridSpec {
    std::optional<int> N;
    std::vector<int> ladder;
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct KernelSpec {
    KernelShape shape = KernelShape::triangular;
    double support = 0.2;
    double mass = 1.0;
    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

struct DispersalSpec {
    DispersalShape shape = DispersalShape::constant;
    double value = 1.0;     // constant
    double intercept = 1.0; // affine
    double slope = 0.0;
    double exponent = 0.5;  // power-degenerate
    double cap = 1.0;
    double g_floor = 1e-8;
    friend bool operator==(const DispersalSpec&, const DispersalSpec&) = default;
};

struct CoefficientSpec {
    CoefficientShape shape = CoefficientShape::constant;
    double value = 0.0; // constant
    double sigma = 0.0;
    double c = 1.0;
    double gamma = 2.0;
    double radius = 0.0;
    std::vector<double> center{0.0};
    friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;
};

// Logistic f = u (mu0 - mu2 |x|^2 - u).
struct NonlinearitySpec {
    double mu0 = 0.0;
    double mu2 = 0.0;
    friend bool operator==(const NonlinearitySpec&, const NonlinearitySpec&) = default;
};

struct SolverSpec {
    double tol = 1e-10;
    int max_iter = 100000;
    std::optional<double> dt;
    double T = 200.0;
    std::optional<double> k;
    std::uint64_t seed = 0;
    std::optional<bool> renormalize;
    int battery = 50;
    double cutoff_margin = 0.25;
    int checkpoints = 10;
    Stepper stepper = Stepper::explicit_euler;
    double u0 = 0.1;
    double evolve_tol = 1e-6;
    int subsolution_n = 20;
    double epsilon = 0.01;
    friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

struct RankOneSpec {
    double rho = 0.2;
    friend bool operator==(const RankOneSpec&, const RankOneSpec&) = default;
};

struct ExhaustionSpec {
    std::vector<double> core{-1.0, 1.0};
    std::vector<double> radii;
    double h = 1.0 / 64.0;
    friend bool operator==(const ExhaustionSpec&, const ExhaustionSpec&) = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    ExperimentKind kind = ExperimentKind::eigen;
    DomainSpec domain;
    GridSpec grid;
    std::optional<KernelSpec> kernel;
    DispersalSpec dispersal;
    CoefficientSpec coefficient;
    std::optional<NonlinearitySpec> nonlinearity;
    SolverSpec solver;
    std::optional<RankOneSpec> rankone;
    std::optional<ExhaustionSpec> exhaustion;
    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// A config file holds one scenario at top level or several under [[scenario]].
struct ScenarioSet {
    std::vector<ScenarioConfig> scenarios;
    std::string output_dir = ".";
    friend bool operator==(const ScenarioSet&, const ScenarioSet&) = default;
};

// Throws ConfigError (with a line number when one is known).
ScenarioSet parse_config(const std::filesystem::path& path);
ScenarioSet parse_config_string(std::string_view text, std::string_view source = "<string>");

// TOML text with every default spelled out; parses back to the same set.
std::string to_toml(const ScenarioSet& set);
std::string to_toml(const ScenarioConfig& config);

std::string_view kind_name(ExperimentKind kind);

// Profile objects described by a config.
KernelJ make_kernel(const ScenarioConfig& config);
DispersalG make_dispersal(const ScenarioConfig& config, const Domain& domain);
CoefficientA make_coefficient(const ScenarioConfig& config);
KPPNonlinearity make_nonlinearity(const ScenarioConfig& config);
Domain make_domain(const ScenarioConfig& config);
AssemblyOptions make_assembly(const ScenarioConfig& config);
EigenOptions make_eigen(const ScenarioConfig& config);

// Builds the grid at the scenario's first resolution and validates every profile.
void validate_profiles(const ScenarioConfig& config);

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunReport {
    std::string scenario;
    ExperimentKind kind = ExperimentKind::eigen;
    std::string echo;
    std::vector<std::string> lines;
    std::vector<Verdict> verdicts;
    std::vector<Table> tables;
    double wall_clock = 0.0;
    std::string version;
    std::optional<std::string> error;

    bool passed() const;
    std::string text() const;
};

RunReport run(const ScenarioConfig& config);

// Header plus one line per row; numbers printed with 17 significant digits.
void emit_csv(const Table& table, const std::filesystem::path& path);
std::string csv_text(const Table& table);

std::string_view tool_version();

} // namespace nonlocal

#endif
