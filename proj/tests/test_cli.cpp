#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "nonlocal/error.hpp"
#include "nonlocal/scenario.hpp"

using namespace nonlocal;

namespace {

const char* kMinimalEigen = R"(
kind = "eigen"
name = "torus_constant"

[domain]
lower = [-1.0]
upper = [1.0]
geometry = "torus"

[grid]
N = 64

[kernel]
shape = "uniform"
support = 0.25

[dispersal]
shape = "constant"
value = 1.0

[coefficient]
shape = "constant"
value = -0.3
)";

const char* kKpp = R"(
kind = "kpp"
name = "logistic"
domain = { lower = [-1.0], upper = [1.0], geometry = "torus" }
grid = { N = 64 }
kernel = { shape = "uniform", support = 0.25 }
coefficient = { shape = "constant", value = -1.0 }
nonlinearity = { shape = "logistic", mu0 = 0.4 }
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

std::string error_of(const std::string& text) {
    try {
        parse_config_string(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_CASE("minimal eigen scenario parses with defaults") {
    const ScenarioSet set = parse_config_string(kMinimalEigen);
    REQUIRE(set.scenarios.size() == 1);
    const ScenarioConfig& c = set.scenarios.front();
    CHECK(c.kind == ExperimentKind::eigen);
    CHECK(c.domain.geometry == Geometry::torus);
    CHECK(*c.grid.N == 64);
    CHECK(c.kernel->shape == KernelShape::uniform);
    CHECK(c.solver.tol == 1e-10);
    CHECK(c.solver.max_iter == 100000);
    CHECK(set.output_dir == ".");
}

TEST_CASE("config errors") {
    CHECK(error_of(replace(kKpp, "nonlinearity = { shape = \"logistic\", mu0 = 0.4 }\n", "")).find(
              "missing nonlinearity") != std::string::npos);
    CHECK(error_of(replace(kMinimalEigen, "kind = \"eigen\"", "kind = \"mp\"")).find("torus") != std::string::npos);
    const std::string unknown = error_of(replace(kMinimalEigen, "N = 64", "N = 64\nresolution = 3"));
    CHECK(unknown.find("resolution") != std::string::npos);
    CHECK(unknown.find("line 12") != std::string::npos);
    CHECK(error_of(replace(kMinimalEigen, "\"uniform\"", "\"gaussian\"")).find("gaussian") != std::string::npos);
    CHECK(error_of(replace(kMinimalEigen, "[coefficient]", "[coefficients]")).find("coefficient") !=
          std::string::npos);
    CHECK(error_of("kind = \"eigen\"\nname = [").find("line") != std::string::npos);
    CHECK(error_of(replace(kMinimalEigen, "support = 0.25", "support = nan")) != "");
    CHECK(error_of(replace(kMinimalEigen, "kind = \"eigen\"", "kind = \"ladder\"")).find("ladder") !=
          std::string::npos);
    CHECK_THROWS_AS(parse_config("/nonexistent/config.toml"), ConfigError);
}

TEST_CASE("echo round-trips") {
    for (const char* text : {kMinimalEigen, kKpp}) {
        const ScenarioSet set = parse_config_string(text);
        const std::string echo = to_toml(set);
        const ScenarioSet again = parse_config_string(echo);
        CHECK(again == set);
        CHECK(to_toml(again) == echo);
    }
    ScenarioSet set = parse_config_string(kMinimalEigen);
    set.scenarios.front().solver.tol = 0.1 + 0.2;
    set.scenarios.front().solver.dt = 1.0 / 3.0;
    CHECK(parse_config_string(to_toml(set)) == set);
}

TEST_CASE("CSV tables") {
    Table ladder{"ladder", {"N", "h", "lambda_p", "sigma", "sigma_prime", "concentration_ratio"}, {}};
    CHECK(csv_text(ladder) == "N,h,lambda_p,sigma,sigma_prime,concentration_ratio\n");
    for (int k = 0; k < 4; ++k)
        ladder.rows.push_back({64.0 * (1 << k), 0.1, -0.5, 0.0, 1.0, 1.5});
    CHECK(line_count(csv_text(ladder)) == 5);
    CHECK(csv_text(ladder).find("\n64,0.10000000000000001,-0.5,0,1,1.5\n") != std::string::npos);
    const auto path = std::filesystem::temp_directory_path() / "nonlocal_csv_test.csv";
    emit_csv(ladder, path);
    CHECK(slurp(path) == csv_text(ladder));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(emit_csv(ladder, "/nonexistent/dir/x.csv"), Error);
}

TEST_CASE("run: torus constant scenario") {
    const RunReport r = run(parse_config_string(kMinimalEigen).scenarios.front());
    CHECK(r.passed());
    CHECK(r.text().find("lambda_p = -0.700000000") != std::string::npos);
    CHECK(r.text().find("sandwich -sigma' < lambda_p < -sigma: PASS") != std::string::npos);
    REQUIRE(r.tables.size() == 1);
    CHECK(r.tables.front().rows.size() == 64);
    CHECK(r.version == tool_version());
    CHECK(parse_config_string(r.echo).scenarios.front() == parse_config_string(kMinimalEigen).scenarios.front());
}

TEST_CASE("run: kpp persistence and evolution checkpoints") {
    const RunReport kpp = run(parse_config_string(kKpp).scenarios.front());
    CHECK(kpp.passed());
    CHECK(kpp.text().find("persistence (lambda_p = -0.400)") != std::string::npos);
    REQUIRE(kpp.tables.size() == 1);
    CHECK(kpp.tables.front().name == "steady_state");

    const RunReport ev = run(parse_config_string(replace(kKpp, "kind = \"kpp\"", "kind = \"evolve\"")).scenarios.front());
    CHECK(ev.passed());
    REQUIRE(ev.tables.size() == 1);
    CHECK(ev.tables.front().header ==
          std::vector<std::string>{"t", "sup_dist_to_p", "sup_dist_to_0", "min_u", "max_u"});
    CHECK(ev.tables.front().rows.size() == 10);
}

TEST_CASE("run: rank-one counterexample ladder") {
    const char* text = R"(
kind = "rankone"
name = "sqrt"
domain = { lower = [-1.0], upper = [1.0] }
grid = { ladder = [128, 256, 512, 1024] }
coefficient = { shape = "power-contact", sigma = 0.0, gamma = 0.5 }
rankone = { rho = 0.2 }
)";
    const RunReport r = run(parse_config_string(text).scenarios.front());
    CHECK(r.passed());
    CHECK(r.text().find("existence verdict: degenerate") != std::string::npos);
    REQUIRE(r.tables.size() == 1);
    const Table& t = r.tables.front();
    CHECK(t.rows.size() == 4);
    for (std::size_t k = 1; k < t.rows.size(); ++k)
        CHECK(t.rows[k][5] >= 1.5 * t.rows[k - 1][5]);
}

TEST_CASE("run: module errors carry the scenario name") {
    const std::string text = replace(kMinimalEigen, "N = 64", "N = 64\n\n[solver]\nmax_iter = 1");
    const std::string quad = replace(replace(text, "\"constant\"\nvalue = -0.3", "\"quadratic-well\""),
                                     "geometry = \"torus\"", "geometry = \"bounded\"");
    const RunReport r = run(parse_config_string(quad).scenarios.front());
    CHECK_FALSE(r.passed());
    REQUIRE(r.error);
    CHECK(r.error->find("torus_constant") != std::string::npos);
}

TEST_CASE("identical configs give bit-identical CSV") {
    const char* text = R"(
kind = "mp"
name = "mp"
domain = { lower = [-1.0], upper = [1.0] }
grid = { N = 64 }
kernel = { shape = "cosine-bump", support = 0.3 }
coefficient = { shape = "constant", value = -1.5 }
solver = { seed = 5, battery = 20 }
)";
    const ScenarioConfig c = parse_config_string(text).scenarios.front();
    const RunReport a = run(c);
    const RunReport b = run(c);
    REQUIRE(a.tables.size() == b.tables.size());
    for (std::size_t k = 0; k < a.tables.size(); ++k)
        CHECK(csv_text(a.tables[k]) == csv_text(b.tables[k]));
    CHECK(a.tables.front().rows.size() == 20);
}
