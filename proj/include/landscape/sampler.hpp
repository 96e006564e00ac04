#pragma once

#include "landscape/model_space.hpp"
#include "landscape/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace landscape {

/// Symmetric proposal kernels over the indices of a ModelSpace.
///
/// NeighborStep proposes index - 1 or index + 1 with probability 1/2 each;
/// a move past either end becomes a proposal to stay put, so
/// Q(i, j) = Q(j, i). UniformJump proposes each other index with probability
/// 1 / (n - 1) and, for a single state, the state itself.
enum class ProposalKind { NeighborStep, UniformJump };

double proposal_probability(ProposalKind kind, std::size_t n, std::size_t from, std::size_t to) noexcept;
/// Dense Q with Q(i, j) = proposal_probability(kind, n, i, j).
Eigen::MatrixXd proposal_matrix(ProposalKind kind, std::size_t n);

struct StepResult {
    std::size_t next_index = 0;
    bool accepted = false;
};

/// One Metropolis update targeting exp(-A_lambda / T). Always consumes
/// exactly two draws from `rng`: one for the proposal, one for acceptance.
StepResult metropolis_step(std::size_t current, const ModelSpace& space, ProposalKind proposal,
                           double lambda, double temperature, CounterRng& rng);

/// Exact transition matrix: off-diagonal Q(i,j) min{1, exp(-(A_j - A_i)/T)},
/// rejected mass on the diagonal. Spaces above 1000 states are rejected.
Eigen::MatrixXd transition_matrix(const ModelSpace& space, ProposalKind proposal, double lambda,
                                  double temperature);
/// Same construction for arbitrary actions and an arbitrary proposal matrix.
Eigen::MatrixXd transition_matrix(std::span<const double> actions, const Eigen::MatrixXd& proposal,
                                  double temperature);

/// max over ordered pairs of |pi_i P_ij - pi_j P_ji| with pi the Gibbs distribution.
double detailed_balance_check(const ModelSpace& space, ProposalKind proposal, double lambda,
                              double temperature);
double detailed_balance_check(std::span<const double> actions, const Eigen::MatrixXd& transition,
                              double temperature);

/// Visit frequencies of a chain started at index 0, counted after `burn_in`
/// of `n_steps` steps.
std::vector<double> stationary_distribution_empirical(const ModelSpace& space, ProposalKind proposal,
                                                      double lambda, double temperature,
                                                      std::uint64_t n_steps, std::uint64_t burn_in,
                                                      std::uint64_t seed);

double total_variation(std::span<const double> p, std::span<const double> q);

struct AnnealingConfig {
    double t0 = 10.0;
    double t_min = 1e-3;
    double gamma = 0.95;
    int steps_per_temperature = 200;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    ProposalKind proposal = ProposalKind::UniformJump;
    bool record_trace = false;
};

void validate(const AnnealingConfig& config);

struct ChainStats {
    std::vector<std::uint64_t> visits; // state after each step
    double acceptance_rate = 0.0;      // self-proposals count as accepted
    std::size_t final_state_index = 0;
    std::uint64_t trajectory_length = 0;
};

struct TraceRow {
    std::uint64_t step = 0;
    double temperature = 0.0;
    std::size_t state_index = 0;
    double action = 0.0;
    bool accepted = false;
};

struct AnnealingResult {
    std::size_t best_index = 0;
    double best_action = 0.0;
    ChainStats stats;
    std::vector<double> best_action_by_level; // record after each temperature level
    std::vector<TraceRow> trace;              // filled when record_trace is set
};

/// Metropolis steps on the geometric schedule T_k = t0 * gamma^k while
/// T_k > t_min, `steps_per_temperature` steps per level. Returns the
/// lowest-action state ever visited (ties: lower index), not the final state.
AnnealingResult simulated_annealing(const ModelSpace& space, const AnnealingConfig& config);

// CSV schema: step,temperature,state_index,action,accepted
void write_trace_csv(std::span<const TraceRow> trace, const std::filesystem::path& path);

} // namespace landscape
