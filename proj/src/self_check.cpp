#include "landscape/self_check.hpp"

#include "landscape/duality.hpp"
#include "landscape/sampler.hpp"
#include "landscape/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace landscape {

ModelSpace random_space(CounterRng& rng, int max_points, int max_complexity, double max_loss) {
    const int size = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_points)));
    std::vector<int> pool(static_cast<std::size_t>(max_complexity));
    std::iota(pool.begin(), pool.end(), 1);
    // partial Fisher-Yates for distinct complexities
    for (int i = 0; i < size; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.next_below(pool.size() - static_cast<std::size_t>(i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    std::vector<int> chosen(pool.begin(), pool.begin() + size);
    std::sort(chosen.begin(), chosen.end());

    std::vector<ModelPoint> points;
    for (int c : chosen) {
        ModelPoint p;
        p.complexity = c;
        p.param_index = c;
        p.train_loss = max_loss * rng.next_uniform();
        points.push_back(p);
    }
    return ModelSpace(std::move(points), "random");
}

std::vector<CheckResult> run_self_checks(std::uint64_t seed) {
    CounterRng rng(seed, 0xc0ffeeULL);
    std::vector<CheckResult> results;

    for (auto kind : {ProposalKind::NeighborStep, ProposalKind::UniformJump}) {
        CheckResult r{kind == ProposalKind::NeighborStep ? "detailed balance (neighbor step)"
                                                         : "detailed balance (uniform jump)",
                      true, 0.0, 1e-12};
        for (int s = 0; s < 20; ++s) {
            const auto space = random_space(rng, 50, 60, 10.0);
            for (double lambda : {0.0, 0.5, 2.0}) {
                for (double t : {0.5, 1.0, 4.0}) {
                    r.worst = std::max(r.worst, detailed_balance_check(space, kind, lambda, t));
                }
            }
        }
        r.passed = r.worst <= r.tolerance;
        results.push_back(r);
    }

    CheckResult duality{"primal-dual free energy (bit-exact)", true, 0.0, 0.0};
    for (int s = 0; s < 100; ++s) {
        const auto space = random_space(rng, 20, 30, 10.0);
        const auto sf = structure_function(space);
        for (int k = 0; k < 50; ++k) {
            const double lambda = 5.0 * rng.next_uniform();
            const double gap = std::abs(fenchel_h_to_F(sf, lambda) - free_energy_zero_T(space, lambda).free_energy);
            duality.worst = std::max(duality.worst, gap);
        }
    }
    duality.passed = duality.worst == 0.0;
    results.push_back(duality);
    return results;
}

} // namespace landscape
