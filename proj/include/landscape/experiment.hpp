#pragma once

#include "landscape/dataset.hpp"
#include "landscape/duality.hpp"
#include "landscape/errors.hpp"
#include "landscape/model_space.hpp"
#include "landscape/thermo.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace landscape {

struct LambdaGrid {
    double min = 1e-3;
    double max = 1e3;
    int count = 241;
    bool logarithmic = true;

    /// Grid values; the endpoints are exactly `min` and `max`.
    std::vector<double> values() const;

    bool operator==(const LambdaGrid&) const = default;
};

/// One experiment. Defaults are the "poly6" profile.
struct ExperimentConfig {
    std::string profile = "poly6";
    Family family = Family::Polynomial;
    int freq_n = 3;
    std::size_t n_train = 256;
    std::size_t n_test = 512;
    double noise_sigma = 0.25;
    int max_index = 30;
    LambdaGrid lambda_grid;
    double temperature = 1.0;
    std::uint64_t seed = 11;
    std::filesystem::path output_dir = "landscape_out";
    double divergence_factor = 1.1;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Invalid configuration; `field()` names the offending key.
class ConfigError : public InvalidArgument {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

std::vector<std::string_view> profile_names();
/// Throws ConfigError for unknown names.
ExperimentConfig profile_config(std::string_view name);

/// Sets one key from its textual value (keys as in the config file).
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);
void validate(const ExperimentConfig& config);

/// Config file grammar, one setting per line:
///   line    := blank | comment | setting
///   comment := '#' any*
///   setting := key ws* '=' ws* value ws*
/// A `profile` line, wherever it appears, is applied first; the remaining
/// settings override it in file order. Keys may appear once.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Renders a config in the grammar above; parse_config(to_config_text(c)) == c.
std::string to_config_text(const ExperimentConfig& config);

struct RunReport {
    ExperimentConfig config;
    Dataset dataset;
    ModelSpace space;
    StructureFunction structure;
    FreeEnergyCurve zero_temperature;
    FreeEnergyCurve thermal;
    std::vector<EnvelopeBreakpoint> breakpoints;
    std::vector<bool> breakpoint_in_range; // strictly inside (lambda min, lambda max)
    std::vector<ResonanceReport> resonances; // one per adjacent pair of envelope vertices
    std::vector<double> chi_peak_lambdas;    // interior local maxima of the thermal chi
    int elbow_alpha = 0;
    std::string tool_version;
};

RunReport run_experiment(const ExperimentConfig& config);

struct DivergenceRow {
    int complexity = 0;
    double train_sse = 0.0;
    double test_sse = 0.0; // clean test SSE
    double ratio = 0.0;    // test / train
};

struct DivergenceTable {
    std::vector<DivergenceRow> rows;
    double factor = 1.1;
    /// First complexity whose clean test SSE exceeds factor x its running minimum.
    std::optional<int> flagged_complexity;
};

DivergenceTable compare_train_test(const RunReport& report, double factor = 1.1);

/// Writes loss_vs_complexity.csv, structure_function.csv, free_energy.csv (T = 0),
/// susceptibility.csv (configured T) and breakpoints.csv into `directory`.
std::vector<std::filesystem::path> emit_plot_data(const RunReport& report,
                                                  const std::filesystem::path& directory);

/// emit_plot_data plus dataset.csv, train_test.csv, config.txt and summary.txt.
std::vector<std::filesystem::path> write_report(const RunReport& report,
                                                const std::filesystem::path& directory);

std::string format_summary(const RunReport& report);

} // namespace landscape
