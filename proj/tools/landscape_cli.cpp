// landscape: loss-complexity landscapes, free-energy sweeps and annealing
// over enumerable model families.
//
// Exit codes: 0 success, 1 failed self-check, 2 invalid arguments or config,
// 3 numerical failure, 4 file I/O failure.

#include "landscape/duality.hpp"
#include "landscape/experiment.hpp"
#include "landscape/sampler.hpp"
#include "landscape/self_check.hpp"
#include "landscape/thermo.hpp"
#include "landscape/version.hpp"

#include <CLI11.hpp>

#include <fmt/format.h>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

using namespace landscape;

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct GridFlags {
    double min = 1e-3;
    double max = 1e3;
    int count = 241;
    std::string spacing = "log";

    void add_to(CLI::App* app) {
        app->add_option("--lambda-min", min, "Smallest lambda")->capture_default_str();
        app->add_option("--lambda-max", max, "Largest lambda")->capture_default_str();
        app->add_option("--lambda-count", count, "Number of grid points")->capture_default_str();
        app->add_option("--lambda-spacing", spacing, "log or linear")
            ->check(CLI::IsMember({"log", "linear"}))
            ->capture_default_str();
    }

    LambdaGrid grid() const {
        LambdaGrid g{min, max, count, spacing == "log"};
        ExperimentConfig probe;
        probe.lambda_grid = g;
        validate(probe);
        return g;
    }
};

int run_command(const std::optional<std::string>& config_path, const std::optional<std::string>& profile,
                const std::map<std::string, std::optional<std::string>>& overrides, bool quiet) {
    ExperimentConfig config = config_path ? load_config(*config_path) : ExperimentConfig{};
    if (profile) apply_setting(config, "profile", *profile);
    for (const auto& [key, value] : overrides) {
        if (value) apply_setting(config, key, *value);
    }
    const auto report = run_experiment(config);
    const auto files = write_report(report, config.output_dir);
    if (!quiet) std::cout << format_summary(report);
    std::cout << fmt::format("wrote {} files to {}\n", files.size(), config.output_dir.string());
    return 0;
}

int sweep_command(const std::string& points, const GridFlags& flags, double temperature,
                  const std::string& out, const std::optional<std::string>& breakpoints_out) {
    const auto space = read_space_csv(points);
    const auto curve = sweep_lambda(space, flags.grid().values(), temperature);
    write_curve_csv(curve, out);
    if (breakpoints_out) write_breakpoints_csv(detect_kinks(space), *breakpoints_out);
    std::cout << fmt::format("swept {} lambda values over {} models at T = {} -> {}\n", curve.lambdas.size(),
                             space.size(), temperature, out);
    return 0;
}

int anneal_command(const std::string& points, const AnnealingConfig& config,
                   const std::optional<std::string>& trace_out) {
    const auto space = read_space_csv(points);
    const auto result = simulated_annealing(space, config);
    if (trace_out) write_trace_csv(result.trace, *trace_out);
    const auto exact = free_energy_zero_T(space, config.lambda);
    std::cout << fmt::format("best complexity {} (action {:.9g}); exhaustive minimum complexity {} (action {:.9g})\n",
                             space[result.best_index].complexity, result.best_action, exact.complexity,
                             exact.free_energy);
    std::cout << fmt::format("steps {}, acceptance rate {:.4f}, final state {}\n", result.stats.trajectory_length,
                             result.stats.acceptance_rate, result.stats.final_state_index);
    return 0;
}

int check_command(std::uint64_t seed) {
    bool all = true;
    for (const auto& r : run_self_checks(seed)) {
        std::cout << fmt::format("[{}] {}: worst {:.3g} (tolerance {:.3g})\n", r.passed ? "PASS" : "FAIL", r.name,
                                 r.worst, r.tolerance);
        all = all && r.passed;
    }
    return all ? 0 : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loss-complexity landscapes: structure functions, free energies and susceptibility"};
    app.set_version_flag("--version", fmt::format("{} {}", kToolName, kToolVersion));
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run an experiment and write CSV outputs plus a summary");
    std::optional<std::string> config_path, profile;
    std::map<std::string, std::optional<std::string>> overrides{
        {"family", {}},      {"freq_n", {}},     {"n_train", {}},        {"n_test", {}},
        {"noise_sigma", {}}, {"max_index", {}},  {"lambda_min", {}},     {"lambda_max", {}},
        {"lambda_count", {}}, {"lambda_spacing", {}}, {"temperature", {}}, {"seed", {}},
        {"output_dir", {}},  {"divergence_factor", {}}};
    bool quiet = false;
    run->add_option("--config", config_path, "Config file (key = value lines)");
    run->add_option("--profile", profile, "Preset: poly6, fourier4 or tree4");
    const std::map<std::string, std::string> flag_names{
        {"family", "--family"},           {"freq_n", "--freq-n"},
        {"n_train", "--n-train"},         {"n_test", "--n-test"},
        {"noise_sigma", "--sigma"},       {"max_index", "--max-index"},
        {"lambda_min", "--lambda-min"},   {"lambda_max", "--lambda-max"},
        {"lambda_count", "--lambda-count"}, {"lambda_spacing", "--lambda-spacing"},
        {"temperature", "--temperature"}, {"seed", "--seed"},
        {"output_dir", "--output-dir,-o"}, {"divergence_factor", "--divergence-factor"}};
    for (const auto& [key, flag] : flag_names) {
        run->add_option(flag, overrides.at(key), fmt::format("Override config key '{}'", key));
    }
    run->add_flag("--quiet,-q", quiet, "Do not print the summary");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Sweep lambda over a model table (loss_vs_complexity.csv schema)");
    std::string sweep_points, sweep_out = "free_energy.csv";
    std::optional<std::string> sweep_breakpoints;
    double sweep_temperature = 0.0;
    GridFlags sweep_grid;
    sweep->add_option("--points", sweep_points, "CSV with complexity and train_sse columns")->required();
    sweep->add_option("--temperature,-T", sweep_temperature, "0 for the exact envelope")->capture_default_str();
    sweep->add_option("--out", sweep_out, "Output CSV (lambda,F,mean_comp,chi)")->capture_default_str();
    sweep->add_option("--breakpoints", sweep_breakpoints, "Also write envelope breakpoints here");
    sweep_grid.add_to(sweep);

    // anneal
    auto* anneal = app.add_subcommand("anneal", "Simulated annealing over a model table");
    std::string anneal_points;
    std::optional<std::string> trace_out;
    AnnealingConfig anneal_config;
    std::string kernel = "uniform";
    anneal->add_option("--points", anneal_points, "CSV with complexity and train_sse columns")->required();
    anneal->add_option("--lambda", anneal_config.lambda, "Lagrange multiplier")->capture_default_str();
    anneal->add_option("--t0", anneal_config.t0, "Initial temperature")->capture_default_str();
    anneal->add_option("--t-min", anneal_config.t_min, "Stop once T <= t_min")->capture_default_str();
    anneal->add_option("--gamma", anneal_config.gamma, "Cooling factor in (0,1)")->capture_default_str();
    anneal->add_option("--steps", anneal_config.steps_per_temperature, "Steps per temperature level")
        ->capture_default_str();
    anneal->add_option("--seed", anneal_config.seed, "Chain seed")->capture_default_str();
    anneal->add_option("--kernel", kernel, "uniform or neighbor")
        ->check(CLI::IsMember({"uniform", "neighbor"}))
        ->capture_default_str();
    anneal->add_option("--trace", trace_out, "Write the chain trace CSV here");

    // check
    auto* check = app.add_subcommand("check", "Run detailed-balance and duality self-tests");
    std::uint64_t check_seed = 2024;
    check->add_option("--seed", check_seed, "Seed for the random spaces")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*run) return run_command(config_path, profile, overrides, quiet);
        if (*sweep) return sweep_command(sweep_points, sweep_grid, sweep_temperature, sweep_out, sweep_breakpoints);
        if (*anneal) {
            anneal_config.proposal = kernel == "neighbor" ? ProposalKind::NeighborStep : ProposalKind::UniformJump;
            anneal_config.record_trace = trace_out.has_value();
            return anneal_command(anneal_points, anneal_config, trace_out);
        }
        if (*check) return check_command(check_seed);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
