#include "landscape/sampler.hpp"

#include "landscape/csv.hpp"
#include "landscape/errors.hpp"
#include "landscape/thermo.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace landscape {

namespace {

constexpr std::size_t kMaxMatrixStates = 1000;

void require_temperature(double temperature) {
    if (!std::isfinite(temperature) || !(temperature > 0.0)) {
        throw InvalidArgument(fmt::format("temperature must be finite and > 0, got {}", temperature));
    }
}

std::size_t propose(ProposalKind kind, std::size_t n, std::size_t current, CounterRng& rng) {
    switch (kind) {
    case ProposalKind::NeighborStep: {
        const bool up = (rng.next_u64() >> 63) != 0;
        if (up) return current + 1 < n ? current + 1 : current;
        return current > 0 ? current - 1 : current;
    }
    case ProposalKind::UniformJump: {
        if (n == 1) {
            rng.next_u64();
            return current;
        }
        auto j = static_cast<std::size_t>(rng.next_below(n - 1));
        return j >= current ? j + 1 : j;
    }
    }
    return current;
}

} // namespace

double proposal_probability(ProposalKind kind, std::size_t n, std::size_t from, std::size_t to) noexcept {
    if (from >= n || to >= n) return 0.0;
    switch (kind) {
    case ProposalKind::NeighborStep: {
        double p = 0.0;
        // the two half-probability moves, each clamped to `from` at an edge
        const std::size_t down = from > 0 ? from - 1 : from;
        const std::size_t up = from + 1 < n ? from + 1 : from;
        if (down == to) p += 0.5;
        if (up == to) p += 0.5;
        return p;
    }
    case ProposalKind::UniformJump:
        if (n == 1) return 1.0;
        return from == to ? 0.0 : 1.0 / static_cast<double>(n - 1);
    }
    return 0.0;
}

Eigen::MatrixXd proposal_matrix(ProposalKind kind, std::size_t n) {
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd q(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        for (Eigen::Index j = 0; j < size; ++j) {
            q(i, j) = proposal_probability(kind, n, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    return q;
}

StepResult metropolis_step(std::size_t current, const ModelSpace& space, ProposalKind proposal,
                           double lambda, double temperature, CounterRng& rng) {
    require_temperature(temperature);
    if (current >= space.size()) {
        throw InvalidArgument(fmt::format("state index {} out of range", current));
    }
    const std::size_t candidate = propose(proposal, space.size(), current, rng);
    const double u = rng.next_uniform();
    const double delta = action(space[candidate], lambda) - action(space[current], lambda);
    if (delta <= 0.0 || u < std::exp(-delta / temperature)) return {candidate, true};
    return {current, false};
}

Eigen::MatrixXd transition_matrix(std::span<const double> actions, const Eigen::MatrixXd& proposal,
                                  double temperature) {
    require_temperature(temperature);
    const auto n = static_cast<Eigen::Index>(actions.size());
    if (actions.size() > kMaxMatrixStates) {
        throw InvalidArgument(fmt::format("transition matrix limited to {} states, got {}",
                                          kMaxMatrixStates, actions.size()));
    }
    if (proposal.rows() != n || proposal.cols() != n) {
        throw InvalidArgument("proposal matrix does not match the number of states");
    }
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double rejected = proposal(i, i);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double delta = actions[static_cast<std::size_t>(j)] - actions[static_cast<std::size_t>(i)];
            const double accept = delta <= 0.0 ? 1.0 : std::exp(-delta / temperature);
            p(i, j) = proposal(i, j) * accept;
            rejected += proposal(i, j) * (1.0 - accept);
        }
        p(i, i) = rejected;
    }
    return p;
}

Eigen::MatrixXd transition_matrix(const ModelSpace& space, ProposalKind proposal, double lambda,
                                  double temperature) {
    if (space.size() > kMaxMatrixStates) {
        throw InvalidArgument(fmt::format("transition matrix limited to {} states, got {}",
                                          kMaxMatrixStates, space.size()));
    }
    return transition_matrix(actions(space, lambda), proposal_matrix(proposal, space.size()), temperature);
}

double detailed_balance_check(std::span<const double> actions, const Eigen::MatrixXd& transition,
                              double temperature) {
    const auto pi = gibbs_from_actions(actions, temperature).probabilities;
    const auto n = static_cast<Eigen::Index>(actions.size());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double forward = pi[static_cast<std::size_t>(i)] * transition(i, j);
            const double backward = pi[static_cast<std::size_t>(j)] * transition(j, i);
            worst = std::max(worst, std::abs(forward - backward));
        }
    }
    return worst;
}

double detailed_balance_check(const ModelSpace& space, ProposalKind proposal, double lambda,
                              double temperature) {
    const auto a = actions(space, lambda);
    return detailed_balance_check(a, transition_matrix(space, proposal, lambda, temperature), temperature);
}

std::vector<double> stationary_distribution_empirical(const ModelSpace& space, ProposalKind proposal,
                                                      double lambda, double temperature,
                                                      std::uint64_t n_steps, std::uint64_t burn_in,
                                                      std::uint64_t seed) {
    require_temperature(temperature);
    if (n_steps <= burn_in) throw InvalidArgument("n_steps must exceed burn_in");

    CounterRng rng(seed, Stream::Chain);
    std::vector<std::uint64_t> counts(space.size(), 0);
    std::size_t state = 0;
    for (std::uint64_t step = 1; step <= n_steps; ++step) {
        state = metropolis_step(state, space, proposal, lambda, temperature, rng).next_index;
        if (step > burn_in) ++counts[state];
    }
    std::vector<double> frequencies(space.size());
    const auto kept = static_cast<double>(n_steps - burn_in);
    for (std::size_t i = 0; i < counts.size(); ++i) frequencies[i] = static_cast<double>(counts[i]) / kept;
    return frequencies;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw InvalidArgument("total_variation: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
    return 0.5 * sum;
}

void validate(const AnnealingConfig& config) {
    if (!(config.t0 > 0.0) || !std::isfinite(config.t0)) throw InvalidArgument("t0 must be > 0");
    if (!(config.t_min > 0.0) || !(config.t_min < config.t0)) {
        throw InvalidArgument("t_min must satisfy 0 < t_min < t0");
    }
    if (!(config.gamma > 0.0 && config.gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
    if (config.steps_per_temperature < 1) throw InvalidArgument("steps_per_temperature must be >= 1");
    if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda)) {
        throw InvalidArgument("lambda must be finite and >= 0");
    }
}

AnnealingResult simulated_annealing(const ModelSpace& space, const AnnealingConfig& config) {
    validate(config);

    CounterRng init(config.seed, Stream::ChainInit);
    CounterRng rng(config.seed, Stream::Chain);

    AnnealingResult result;
    auto& stats = result.stats;
    stats.visits.assign(space.size(), 0);

    std::size_t state = static_cast<std::size_t>(init.next_below(space.size()));
    result.best_index = state;
    result.best_action = action(space[state], config.lambda);

    std::uint64_t accepted = 0;
    for (double temperature = config.t0; temperature > config.t_min; temperature *= config.gamma) {
        for (int s = 0; s < config.steps_per_temperature; ++s) {
            const auto step = metropolis_step(state, space, config.proposal, config.lambda, temperature, rng);
            state = step.next_index;
            accepted += step.accepted ? 1 : 0;
            ++stats.visits[state];
            ++stats.trajectory_length;

            const double a = action(space[state], config.lambda);
            if (a < result.best_action || (a == result.best_action && state < result.best_index)) {
                result.best_action = a;
                result.best_index = state;
            }
            if (config.record_trace) {
                result.trace.push_back({stats.trajectory_length, temperature, state, a, step.accepted});
            }
        }
        result.best_action_by_level.push_back(result.best_action);
    }

    stats.final_state_index = state;
    stats.acceptance_rate = stats.trajectory_length == 0
                                ? 1.0
                                : static_cast<double>(accepted) / static_cast<double>(stats.trajectory_length);
    return result;
}

void write_trace_csv(std::span<const TraceRow> trace, const std::filesystem::path& path) {
    csv::Writer out(path, {"step", "temperature", "state_index", "action", "accepted"});
    for (const auto& row : trace) {
        out.row({std::to_string(row.step), csv::format_exact(row.temperature),
                 std::to_string(row.state_index), csv::format_exact(row.action),
                 row.accepted ? "1" : "0"});
    }
    out.close();
}

} // namespace landscape
