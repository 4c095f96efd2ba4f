#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "nonlocal/error.hpp"
#include "nonlocal/scenario.hpp"

namespace fs = std::filesystem;
using namespace nonlocal;

namespace {

void apply_seed_override(ScenarioSet& set) {
    const char* env = std::getenv("NONLOCAL_SPECTRA_SEED");
    if (!env || !*env)
        return;
    std::uint64_t seed = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, seed);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(std::string("NONLOCAL_SPECTRA_SEED is not an unsigned integer: ") + env, 0);
    for (auto& s : set.scenarios)
        s.solver.seed = seed;
}

void write_outputs(const RunReport& report, const fs::path& dir) {
    for (const auto& table : report.tables)
        emit_csv(table, dir / (report.scenario + "_" + table.name + ".csv"));
    std::ofstream out(dir / (report.scenario + "_report.txt"), std::ios::binary);
    out << report.text();
    if (!out)
        throw Error("cannot write report for " + report.scenario);
}

int run_command(const std::string& config, bool strict, const std::optional<std::string>& out_dir, int workers) {
    ScenarioSet set = parse_config(config);
    apply_seed_override(set);
    const fs::path dir = out_dir ? fs::path(*out_dir) : fs::path(set.output_dir);
    fs::create_directories(dir);

    std::vector<RunReport> reports(set.scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < set.scenarios.size(); i = next++)
            reports[i] = run(set.scenarios[i]);
    };
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), set.scenarios.size());
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < count; ++t)
        pool.emplace_back(worker);
    worker();
    pool.clear();

    bool any_fail = false;
    bool any_error = false;
    for (const auto& report : reports) {
        write_outputs(report, dir);
        std::cout << report.text() << "\n";
        any_fail = any_fail || !report.passed();
        if (report.error) {
            any_error = true;
            std::cerr << "error: " << *report.error << "\n";
        }
    }
    if (any_error)
        return 1;
    return strict && any_fail ? 1 : 0;
}

int validate_command(const std::string& config) {
    const ScenarioSet set = parse_config(config);
    for (const auto& s : set.scenarios)
        validate_profiles(s);
    std::cout << to_toml(set);
    std::cerr << config << ": " << set.scenarios.size() << " scenario(s) valid\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Principal eigenvalues and KPP dynamics for nonlocal dispersal operators"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    std::string config;
    bool strict = false;
    std::optional<std::string> out_dir;
    int workers = 1;
    auto* run_cmd = app.add_subcommand("run", "Run every scenario in a config file");
    run_cmd->add_option("config", config, "TOML scenario file")->required()->check(CLI::ExistingFile);
    run_cmd->add_flag("--strict", strict, "Exit nonzero when any verdict fails");
    run_cmd->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
    run_cmd->add_option("--workers", workers, "Scenarios run concurrently")->check(CLI::PositiveNumber);

    std::string validate_config;
    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a config file, echo it with defaults");
    validate_cmd->add_option("config", validate_config, "TOML scenario file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run_cmd)
            return run_command(config, strict, out_dir, workers);
        return validate_command(validate_config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
