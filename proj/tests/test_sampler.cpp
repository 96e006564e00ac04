#include "landscape/errors.hpp"
#include "landscape/sampler.hpp"
#include "landscape/self_check.hpp"
#include "landscape/thermo.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

using namespace landscape;

namespace {

ModelSpace two_state(double l1, double l2) { return ModelSpace({{1, l1}, {3, l2}}); }

} // namespace

TEST_CASE("metropolis acceptance probabilities") {
    // state 0 -> 1 under UniformJump with two states is always proposed
    CounterRng rng(1, Stream::Chain);
    const auto flat = two_state(0.0, 0.0);
    for (int i = 0; i < 1000; ++i) CHECK(metropolis_step(0, flat, ProposalKind::UniformJump, 0.0, 1.0, rng).accepted);

    const auto downhill = two_state(5.0, 0.0);
    for (int i = 0; i < 1000; ++i) CHECK(metropolis_step(0, downhill, ProposalKind::UniformJump, 1.0, 1.0, rng).accepted);

    // A_1 - A_0 = T ln 2 at lambda = 0
    const double temperature = 0.7;
    const auto uphill = two_state(0.0, temperature * std::log(2.0));
    int accepted = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        accepted += metropolis_step(0, uphill, ProposalKind::UniformJump, 0.0, temperature, rng).accepted;
    }
    CHECK(std::abs(static_cast<double>(accepted) / draws - 0.5) < 0.01);
}

TEST_CASE("metropolis consumes exactly two draws") {
    CounterRng rng(2, Stream::Chain);
    const auto space = ModelSpace({{1, 3.0}, {2, 1.0}, {5, 0.0}, {6, 2.0}});
    std::size_t state = 0;
    for (int i = 0; i < 100; ++i) {
        const auto before = rng.counter();
        state = metropolis_step(state, space, ProposalKind::NeighborStep, 0.3, 0.8, rng).next_index;
        CHECK(rng.counter() - before == 2);
    }
}

TEST_CASE("transition matrices for two states") {
    const auto flat = two_state(0.0, 0.0);
    const Eigen::MatrixXd p = transition_matrix(flat, ProposalKind::UniformJump, 0.0, 1.0);
    CHECK(p(0, 0) == 0.0);
    CHECK(p(0, 1) == 1.0);
    CHECK(p(1, 0) == 1.0);
    CHECK(p(1, 1) == 0.0);

    const auto tilted = two_state(0.0, std::log(2.0));
    const Eigen::MatrixXd q = transition_matrix(tilted, ProposalKind::UniformJump, 0.0, 1.0);
    CHECK(q(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q(1, 0) == 1.0);
    CHECK(q(1, 1) == 0.0);

    const Eigen::MatrixXd n = transition_matrix(flat, ProposalKind::NeighborStep, 0.0, 1.0);
    CHECK(n.isApprox(Eigen::MatrixXd::Constant(2, 2, 0.5)));
}

TEST_CASE("proposal kernels are symmetric and stochastic") {
    for (std::size_t n : {1u, 2u, 3u, 7u}) {
        for (auto kind : {ProposalKind::NeighborStep, ProposalKind::UniformJump}) {
            const Eigen::MatrixXd q = proposal_matrix(kind, n);
            CHECK((q - q.transpose()).cwiseAbs().maxCoeff() == 0.0);
            CHECK((q.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-15);
        }
    }
}

TEST_CASE("transition rows sum to one and size is capped") {
    CounterRng rng(3, Stream::Chain);
    for (int s = 0; s < 20; ++s) {
        const auto space = random_space(rng, 50, 100, 20.0);
        for (auto kind : {ProposalKind::NeighborStep, ProposalKind::UniformJump}) {
            const Eigen::MatrixXd p = transition_matrix(space, kind, 0.5, 1.5);
            CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
            CHECK(p.minCoeff() >= 0.0);
        }
    }
    std::vector<ModelPoint> big;
    for (int c = 1; c <= 1001; ++c) big.push_back({c, 1.0});
    CHECK_THROWS_AS(transition_matrix(ModelSpace(big), ProposalKind::UniformJump, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("detailed balance and stationarity") {
    CounterRng rng(4, Stream::Chain);
    for (int s = 0; s < 20; ++s) {
        const auto space = random_space(rng, 50, 100, 20.0);
        for (auto kind : {ProposalKind::NeighborStep, ProposalKind::UniformJump}) {
            for (double lambda : {0.0, 0.5, 2.0}) {
                for (double temperature : {0.5, 1.0, 4.0}) {
                    CHECK(detailed_balance_check(space, kind, lambda, temperature) <= 1e-12);
                    const auto pi = gibbs(space, {lambda, temperature}).probabilities;
                    const Eigen::RowVectorXd row = Eigen::Map<const Eigen::RowVectorXd>(pi.data(), static_cast<Eigen::Index>(pi.size()));
                    const Eigen::MatrixXd p = transition_matrix(space, kind, lambda, temperature);
                    CHECK((row * p - row).cwiseAbs().maxCoeff() <= 1e-12);
                }
            }
        }
    }
    CHECK(detailed_balance_check(ModelSpace({{1, 1.0}}), ProposalKind::NeighborStep, 1.0, 1.0) == 0.0);
}

TEST_CASE("an asymmetric proposal breaks detailed balance") {
    const std::vector<double> a{0.0, 1.0, 2.0};
    Eigen::MatrixXd q(3, 3);
    q << 0.0, 0.9, 0.1,
         0.5, 0.0, 0.5,
         0.5, 0.5, 0.0;
    const Eigen::MatrixXd p = transition_matrix(a, q, 1.0);
    CHECK(detailed_balance_check(a, p, 1.0) > 1e-3);
}

TEST_CASE("empirical stationary distribution") {
    const auto space = ModelSpace({{1, 4.0}, {2, 2.5}, {3, 1.5}, {4, 1.0}, {5, 0.8}, {6, 0.7}, {7, 0.65},
                                   {8, 0.62}, {9, 0.61}, {10, 0.6}});
    const double lambda = 0.2, temperature = 1.0;
    const auto exact = gibbs(space, {lambda, temperature}).probabilities;
    for (auto kind : {ProposalKind::NeighborStep, ProposalKind::UniformJump}) {
        const auto freq = stationary_distribution_empirical(space, kind, lambda, temperature, 1'000'000, 10'000, 5);
        CHECK(total_variation(freq, exact) <= 0.05);
        CHECK(std::accumulate(freq.begin(), freq.end(), 0.0) == doctest::Approx(1.0));
        CHECK(freq == stationary_distribution_empirical(space, kind, lambda, temperature, 1'000'000, 10'000, 5));
    }

    std::vector<ModelPoint> flat;
    for (int c = 1; c <= 5; ++c) flat.push_back({c, 0.0});
    const auto uniform = stationary_distribution_empirical(ModelSpace(flat), ProposalKind::UniformJump, 0.0, 1.0,
                                                           200'000, 1'000, 6);
    for (double f : uniform) CHECK(std::abs(f - 0.2) < 0.01);

    double previous = 1.0;
    for (std::uint64_t steps : {10'000u, 100'000u, 1'000'000u}) {
        const auto freq = stationary_distribution_empirical(space, ProposalKind::NeighborStep, lambda, temperature,
                                                            steps, 1'000, 7);
        const double tv = total_variation(freq, exact);
        CHECK(tv <= previous + 0.02);
        previous = tv;
    }
    CHECK_THROWS_AS(stationary_distribution_empirical(space, ProposalKind::NeighborStep, 0.0, 1.0, 10, 10, 1),
                    InvalidArgument);
}

TEST_CASE("total variation") {
    const std::vector<double> p{0.5, 0.5}, q{1.0, 0.0};
    CHECK(total_variation(p, q) == 0.5);
    CHECK(total_variation(p, p) == 0.0);
    CHECK_THROWS_AS(total_variation(p, std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("annealing on a single state") {
    AnnealingConfig config;
    const auto result = simulated_annealing(ModelSpace({{3, 2.0}}), config);
    CHECK(result.best_index == 0);
    CHECK(result.best_action == 2.0);
    CHECK(result.stats.acceptance_rate == 1.0);
}

TEST_CASE("annealing finds the minimum past the crossing") {
    const auto space = two_state(2.0, 0.0);
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        AnnealingConfig config;
        config.lambda = 1.5;
        config.seed = seed;
        const auto result = simulated_annealing(space, config);
        hits += result.best_index == 0;
    }
    CHECK(hits >= 95);
}

TEST_CASE("annealing bookkeeping") {
    CounterRng rng(8, Stream::Chain);
    const auto space = random_space(rng, 20, 40, 10.0);
    AnnealingConfig config;
    config.lambda = 0.3;
    config.seed = 9;
    config.steps_per_temperature = 50;
    config.record_trace = true;
    const auto result = simulated_annealing(space, config);

    const auto total = std::accumulate(result.stats.visits.begin(), result.stats.visits.end(), std::uint64_t{0});
    CHECK(total == result.stats.trajectory_length);
    CHECK(result.trace.size() == result.stats.trajectory_length);
    CHECK(result.stats.trajectory_length == result.best_action_by_level.size() * 50);
    for (std::size_t k = 1; k < result.best_action_by_level.size(); ++k) {
        CHECK(result.best_action_by_level[k] <= result.best_action_by_level[k - 1]);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : result.trace) best = std::min(best, row.action);
    CHECK(result.best_action <= best);
    CHECK(result.best_action == action(space[result.best_index], config.lambda));

    const auto path = std::filesystem::temp_directory_path() / "landscape_trace.csv";
    write_trace_csv(result.trace, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,temperature,state_index,action,accepted");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == result.trace.size());

    auto twice = simulated_annealing(space, config);
    CHECK(twice.best_index == result.best_index);
    CHECK(twice.stats.visits == result.stats.visits);
}

TEST_CASE("annealing config validation") {
    AnnealingConfig config;
    config.gamma = 1.0;
    CHECK_THROWS_AS(validate(config), InvalidArgument);
    config = {};
    config.t_min = 20.0;
    CHECK_THROWS_AS(validate(config), InvalidArgument);
    config = {};
    config.steps_per_temperature = 0;
    CHECK_THROWS_AS(validate(config), InvalidArgument);
}
