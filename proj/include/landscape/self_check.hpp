#pragma once

#include "landscape/model_space.hpp"
#include "landscape/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace landscape {

/// Random space with 1..max_points points, distinct complexities drawn from
/// 1..max_complexity and train losses uniform in [0, max_loss).
ModelSpace random_space(CounterRng& rng, int max_points, int max_complexity, double max_loss);

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;     // largest observed violation
    double tolerance = 0.0;
};

/// Detailed balance of both proposal kernels and primal-dual agreement on
/// seeded random spaces.
std::vector<CheckResult> run_self_checks(std::uint64_t seed);

} // namespace landscape
