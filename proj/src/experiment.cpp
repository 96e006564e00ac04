#include "landscape/experiment.hpp"

#include "landscape/csv.hpp"
#include "landscape/version.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace landscape {

namespace {

constexpr int kSummaryDigits = 9;

std::string sig(double value) { return csv::format_sig(value, kSummaryDigits); }

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view value) {
    try {
        return csv::parse_double(value);
    } catch (const IoError&) {
        throw ConfigError(std::string(key), fmt::format("expected a number, got '{}'", value));
    }
}

long long to_integer(std::string_view key, std::string_view value) {
    try {
        return csv::parse_integer(value);
    } catch (const IoError&) {
        throw ConfigError(std::string(key), fmt::format("expected an integer, got '{}'", value));
    }
}

std::uint64_t to_unsigned(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError(std::string(key), fmt::format("expected an unsigned integer, got '{}'", value));
    }
    return out;
}

std::size_t to_size(std::string_view key, std::string_view value) {
    const auto v = to_integer(key, value);
    if (v < 0) throw ConfigError(std::string(key), fmt::format("must be >= 0, got {}", v));
    return static_cast<std::size_t>(v);
}

} // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : InvalidArgument(fmt::format("config field '{}': {}", field, message)), field_(std::move(field)) {}

std::vector<double> LambdaGrid::values() const {
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
    if (count < 2) {
        if (count == 1) out[0] = min;
        return out;
    }
    const double span = static_cast<double>(count - 1);
    if (logarithmic) {
        const double lo = std::log(min);
        const double hi = std::log(max);
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / span);
    } else {
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = min + (max - min) * i / span;
    }
    out.front() = min;
    out.back() = max;
    return out;
}

std::vector<std::string_view> profile_names() { return {"poly6", "fourier4", "tree4"}; }

ExperimentConfig profile_config(std::string_view name) {
    ExperimentConfig config;
    config.profile = std::string(name);
    if (name == "poly6") {
        config.family = Family::Polynomial;
        config.freq_n = 3;
        config.max_index = 30;
    } else if (name == "fourier4") {
        config.family = Family::Fourier;
        config.freq_n = 2;
        config.max_index = 20;
    } else if (name == "tree4") {
        config.family = Family::Tree;
        config.freq_n = 2;
        config.max_index = 10;
    } else {
        throw ConfigError("profile", fmt::format("unknown profile '{}' (known: poly6, fourier4, tree4)", name));
    }
    return config;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
    const std::string k(key);
    if (key == "profile") {
        const auto output = config.output_dir;
        config = profile_config(value);
        config.output_dir = output;
    } else if (key == "family") {
        const auto family = parse_family(value);
        if (!family) throw ConfigError(k, fmt::format("unknown family '{}' (polynomial, fourier, tree)", value));
        config.family = *family;
    } else if (key == "freq_n") {
        config.freq_n = static_cast<int>(to_integer(key, value));
    } else if (key == "n_train") {
        config.n_train = to_size(key, value);
    } else if (key == "n_test") {
        config.n_test = to_size(key, value);
    } else if (key == "noise_sigma") {
        config.noise_sigma = to_double(key, value);
    } else if (key == "max_index") {
        config.max_index = static_cast<int>(to_integer(key, value));
    } else if (key == "lambda_min") {
        config.lambda_grid.min = to_double(key, value);
    } else if (key == "lambda_max") {
        config.lambda_grid.max = to_double(key, value);
    } else if (key == "lambda_count") {
        config.lambda_grid.count = static_cast<int>(to_integer(key, value));
    } else if (key == "lambda_spacing") {
        if (value == "log") config.lambda_grid.logarithmic = true;
        else if (value == "linear") config.lambda_grid.logarithmic = false;
        else throw ConfigError(k, fmt::format("expected 'log' or 'linear', got '{}'", value));
    } else if (key == "temperature") {
        config.temperature = to_double(key, value);
    } else if (key == "seed") {
        config.seed = to_unsigned(key, value);
    } else if (key == "output_dir") {
        config.output_dir = std::filesystem::path(std::string(value));
    } else if (key == "divergence_factor") {
        config.divergence_factor = to_double(key, value);
    } else {
        throw ConfigError(k, "unknown key");
    }
}

void validate(const ExperimentConfig& c) {
    if (c.freq_n < 1) throw ConfigError("freq_n", fmt::format("must be >= 1, got {}", c.freq_n));
    if (c.n_train < 2) throw ConfigError("n_train", fmt::format("must be >= 2, got {}", c.n_train));
    if (c.n_test < 1) throw ConfigError("n_test", fmt::format("must be >= 1, got {}", c.n_test));
    if (!(c.noise_sigma >= 0.0) || !std::isfinite(c.noise_sigma)) {
        throw ConfigError("noise_sigma", fmt::format("must be finite and >= 0, got {}", c.noise_sigma));
    }
    if (c.max_index < 0) throw ConfigError("max_index", fmt::format("must be >= 0, got {}", c.max_index));
    Dataset shape;
    shape.xs.resize(c.n_train);
    const int limit = max_admissible_index(shape, c.family);
    if (c.max_index > limit) {
        throw ConfigError("max_index", fmt::format("{} family allows at most {} with n_train = {}, got {}",
                                                   to_string(c.family), limit, c.n_train, c.max_index));
    }
    const auto& g = c.lambda_grid;
    if (!(g.min >= 0.0) || !std::isfinite(g.min)) {
        throw ConfigError("lambda_min", fmt::format("must be finite and >= 0, got {}", g.min));
    }
    if (!(g.max > g.min) || !std::isfinite(g.max)) {
        throw ConfigError("lambda_max", fmt::format("must be finite and > lambda_min, got {}", g.max));
    }
    if (g.count < 2) throw ConfigError("lambda_count", fmt::format("must be >= 2, got {}", g.count));
    if (g.logarithmic && !(g.min > 0.0)) {
        throw ConfigError("lambda_min", "log spacing needs lambda_min > 0");
    }
    const auto values = g.values();
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) {
            throw ConfigError("lambda_count", "grid is too fine to be strictly increasing");
        }
    }
    if (!(c.temperature >= 0.0) || !std::isfinite(c.temperature)) {
        throw ConfigError("temperature", fmt::format("must be finite and >= 0, got {}", c.temperature));
    }
    if (!(c.divergence_factor >= 1.0) || !std::isfinite(c.divergence_factor)) {
        throw ConfigError("divergence_factor", fmt::format("must be >= 1, got {}", c.divergence_factor));
    }
}

ExperimentConfig parse_config(std::string_view text) {
    struct Setting {
        std::string key;
        std::string value;
        int line;
    };
    std::vector<Setting> settings;
    std::set<std::string> seen;

    std::istringstream stream{std::string(text)};
    std::string raw;
    int line_number = 0;
    while (std::getline(stream, raw)) {
        ++line_number;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(line), fmt::format("line {}: expected 'key = value'", line_number));
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("", fmt::format("line {}: empty key", line_number));
        if (!seen.insert(key).second) {
            throw ConfigError(key, fmt::format("line {}: duplicate key", line_number));
        }
        settings.push_back({std::move(key), std::move(value), line_number});
    }

    ExperimentConfig config;
    for (const auto& s : settings) {
        if (s.key == "profile") apply_setting(config, s.key, s.value);
    }
    for (const auto& s : settings) {
        if (s.key != "profile") apply_setting(config, s.key, s.value);
    }
    validate(config);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string to_config_text(const ExperimentConfig& c) {
    std::string out;
    const auto put = [&](std::string_view key, const std::string& value) {
        out += fmt::format("{} = {}\n", key, value);
    };
    put("profile", c.profile);
    put("family", std::string(to_string(c.family)));
    put("freq_n", std::to_string(c.freq_n));
    put("n_train", std::to_string(c.n_train));
    put("n_test", std::to_string(c.n_test));
    put("noise_sigma", csv::format_exact(c.noise_sigma));
    put("max_index", std::to_string(c.max_index));
    put("lambda_min", csv::format_exact(c.lambda_grid.min));
    put("lambda_max", csv::format_exact(c.lambda_grid.max));
    put("lambda_count", std::to_string(c.lambda_grid.count));
    put("lambda_spacing", c.lambda_grid.logarithmic ? "log" : "linear");
    put("temperature", csv::format_exact(c.temperature));
    put("seed", std::to_string(c.seed));
    put("output_dir", c.output_dir.string());
    put("divergence_factor", csv::format_exact(c.divergence_factor));
    return out;
}

RunReport run_experiment(const ExperimentConfig& config) {
    validate(config);
    auto dataset = generate_dataset(config.n_train, config.n_test, config.freq_n, config.noise_sigma, config.seed);
    auto space = enumerate_space(dataset, config.family, config.max_index);
    auto structure = structure_function(space);

    const auto grid = config.lambda_grid.values();
    auto zero = sweep_lambda(space, grid, 0.0);
    // a zero configured temperature leaves chi identically zero
    auto thermal = sweep_lambda(space, grid, config.temperature);

    auto breakpoints = detect_kinks(space);
    std::vector<bool> in_range;
    std::vector<ResonanceReport> resonances;
    for (const auto& b : breakpoints) {
        in_range.push_back(b.lambda > config.lambda_grid.min && b.lambda < config.lambda_grid.max);
        const ModelPoint* before = nullptr;
        const ModelPoint* after = nullptr;
        for (const auto& p : space) {
            if (p.complexity == b.slope_before) before = &p;
            if (p.complexity == b.slope_after) after = &p;
        }
        resonances.push_back(resonance_two_state(*after, *before));
    }

    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < thermal.chi.size(); ++i) {
        if (thermal.chi[i] > thermal.chi[i - 1] && thermal.chi[i] >= thermal.chi[i + 1]) {
            peaks.push_back(thermal.lambdas[i]);
        }
    }

    const int elbow = elbow_from_test_loss(space);
    return RunReport{config,
                     std::move(dataset),
                     std::move(space),
                     std::move(structure),
                     std::move(zero),
                     std::move(thermal),
                     std::move(breakpoints),
                     std::move(in_range),
                     std::move(resonances),
                     std::move(peaks),
                     elbow,
                     fmt::format("{} {}", kToolName, kToolVersion)};
}

DivergenceTable compare_train_test(const RunReport& report, double factor) {
    DivergenceTable table;
    table.factor = factor;
    double running_min = std::numeric_limits<double>::infinity();
    for (const auto& p : report.space) {
        const double ratio = p.train_loss > 0.0 ? p.test_loss_clean / p.train_loss
                                                : std::numeric_limits<double>::infinity();
        table.rows.push_back({p.complexity, p.train_loss, p.test_loss_clean, ratio});
        if (!table.flagged_complexity && p.test_loss_clean > factor * running_min) {
            table.flagged_complexity = p.complexity;
        }
        running_min = std::min(running_min, p.test_loss_clean);
    }
    return table;
}

std::vector<std::filesystem::path> emit_plot_data(const RunReport& report,
                                                  const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw IoError(fmt::format("cannot create '{}': {}", directory.string(), ec.message()));

    std::vector<std::filesystem::path> written;
    const auto target = [&](const char* name) {
        written.push_back(directory / name);
        return written.back();
    };
    write_space_csv(report.space, target("loss_vs_complexity.csv"));
    write_structure_function_csv(report.structure, target("structure_function.csv"));
    write_curve_csv(report.zero_temperature, target("free_energy.csv"));
    write_curve_csv(report.thermal, target("susceptibility.csv"));
    write_breakpoints_csv(report.breakpoints, target("breakpoints.csv"));
    return written;
}

std::vector<std::filesystem::path> write_report(const RunReport& report,
                                                const std::filesystem::path& directory) {
    auto written = emit_plot_data(report, directory);

    write_dataset_csv(report.dataset, directory / "dataset.csv");
    written.push_back(directory / "dataset.csv");

    const auto table = compare_train_test(report, report.config.divergence_factor);
    {
        csv::Writer out(directory / "train_test.csv", {"complexity", "train_sse", "test_sse", "ratio", "flagged"});
        for (const auto& row : table.rows) {
            const bool flagged = table.flagged_complexity && *table.flagged_complexity == row.complexity;
            out.row({std::to_string(row.complexity), csv::format_exact(row.train_sse),
                     csv::format_exact(row.test_sse), csv::format_exact(row.ratio), flagged ? "1" : "0"});
        }
        out.close();
        written.push_back(directory / "train_test.csv");
    }

    const auto write_text = [&](const char* name, const std::string& text) {
        const auto path = directory / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << text;
        out.close();
        if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
        written.push_back(path);
    };
    write_text("config.txt", to_config_text(report.config));
    write_text("summary.txt", format_summary(report));
    return written;
}

std::string format_summary(const RunReport& r) {
    std::string s;
    const auto line = [&](const std::string& text) {
        s += text;
        s += '\n';
    };
    const auto& g = r.config.lambda_grid;
    line(r.tool_version);
    line(fmt::format("profile: {}", r.config.profile));
    line(fmt::format("family: {}", to_string(r.config.family)));
    line(fmt::format("dataset: {}", r.dataset.identifier()));
    line(fmt::format("lambda grid: {} [{}, {}] x {}", g.logarithmic ? "log" : "linear", sig(g.min),
                     sig(g.max), g.count));
    line(fmt::format("temperature: {}", sig(r.config.temperature)));
    line("");
    line("models: complexity, index, train SSE, test SSE clean, test SSE noisy, h(alpha)");
    for (std::size_t i = 0; i < r.space.size(); ++i) {
        const auto& p = r.space[i];
        line(fmt::format("  {:>4} {:>4}  {:>16} {:>16} {:>16} {:>16}", p.complexity, p.param_index,
                         sig(p.train_loss), sig(p.test_loss_clean), sig(p.test_loss_noisy),
                         sig(r.structure.h[i])));
    }
    line("");
    line(fmt::format("breakpoints of F (zero temperature): {}", r.breakpoints.size()));
    for (std::size_t i = 0; i < r.breakpoints.size(); ++i) {
        const auto& b = r.breakpoints[i];
        line(fmt::format("  lambda = {}  complexity {} -> {}{}", sig(b.lambda), b.slope_before, b.slope_after,
                         r.breakpoint_in_range[i] ? "" : "  [out of range]"));
    }
    line("resonances: lambda*, chi peak (T=1), FWHM (T=1)");
    for (const auto& res : r.resonances) {
        if (!res.lambda_star) continue;
        line(fmt::format("  {}  {}  {}", sig(*res.lambda_star), sig(res.chi_peak), sig(*res.peak_width_estimate)));
    }
    std::string peaks;
    for (double p : r.chi_peak_lambdas) peaks += " " + sig(p);
    line(fmt::format("chi local maxima at lambda (T={}):{}", sig(r.config.temperature), peaks.empty() ? " none" : peaks));
    line("");
    line(fmt::format("elbow alpha* (min noisy test SSE): {}", r.elbow_alpha));
    const auto table = compare_train_test(r, r.config.divergence_factor);
    line(fmt::format("first divergence (factor {}): {}", sig(table.factor),
                     table.flagged_complexity ? std::to_string(*table.flagged_complexity) : "none"));
    return s;
}

} // namespace landscape
