#include "landscape/duality.hpp"

#include "landscape/csv.hpp"
#include "landscape/errors.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace landscape {

StructureFunction structure_function(const ModelSpace& space) {
    StructureFunction sf;
    sf.source_tag = space.dataset_ref();
    sf.alphas.reserve(space.size());
    sf.h.reserve(space.size());
    double running = std::numeric_limits<double>::infinity();
    for (const auto& p : space) {
        running = std::min(running, p.train_loss);
        sf.alphas.push_back(p.complexity);
        sf.h.push_back(running);
    }
    return sf;
}

double fenchel_h_to_F(const StructureFunction& sf, double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw InvalidArgument(fmt::format("lambda must be finite and >= 0, got {}", lambda));
    }
    if (sf.alphas.empty() || sf.alphas.size() != sf.h.size()) {
        throw InvalidArgument("structure function is empty or misaligned");
    }
    double best = sf.h[0] + lambda * static_cast<double>(sf.alphas[0]);
    for (std::size_t i = 1; i < sf.alphas.size(); ++i) {
        best = std::min(best, sf.h[i] + lambda * static_cast<double>(sf.alphas[i]));
    }
    return best;
}

double fenchel_F_to_h(const FreeEnergyCurve& curve, int alpha) {
    if (curve.temperature != 0.0) {
        throw InvalidArgument("fenchel_F_to_h needs a zero-temperature curve");
    }
    if (curve.lambdas.empty() || curve.lambdas.size() != curve.F.size()) {
        throw InvalidArgument("free-energy curve is empty or misaligned");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
        best = std::max(best, curve.F[i] - curve.lambdas[i] * static_cast<double>(alpha));
    }
    return best;
}

std::vector<EnvelopeBreakpoint> detect_kinks(const ModelSpace& space) {
    // Only the hull chain from the smallest complexity to the first point of
    // minimal loss matters for lambda >= 0.
    std::size_t last = 0;
    for (std::size_t i = 1; i < space.size(); ++i) {
        if (space[i].train_loss < space[last].train_loss) last = i;
    }

    std::vector<std::size_t> hull;
    const auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        const double ax = space[a].complexity - space[o].complexity;
        const double ay = space[a].train_loss - space[o].train_loss;
        const double bx = space[b].complexity - space[o].complexity;
        const double by = space[b].train_loss - space[o].train_loss;
        return ax * by - ay * bx;
    };
    for (std::size_t i = 0; i <= last; ++i) {
        // pop non-left turns, collinear included
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0.0) hull.pop_back();
        hull.push_back(i);
    }

    std::vector<EnvelopeBreakpoint> out;
    for (std::size_t k = hull.size(); k-- > 1;) {
        const auto& simple = space[hull[k - 1]];
        const auto& complex = space[hull[k]];
        const double lambda = (simple.train_loss - complex.train_loss) /
                              static_cast<double>(complex.complexity - simple.complexity);
        out.push_back({lambda, complex.complexity, simple.complexity});
    }
    return out;
}

int elbow_from_test_loss(const ModelSpace& space) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < space.size(); ++i) {
        if (space[i].test_loss_noisy < space[best].test_loss_noisy) best = i;
    }
    return space[best].complexity;
}

void write_structure_function_csv(const StructureFunction& sf, const std::filesystem::path& path) {
    csv::Writer out(path, {"alpha", "h"});
    for (std::size_t i = 0; i < sf.alphas.size(); ++i) {
        out.row({std::to_string(sf.alphas[i]), csv::format_exact(sf.h[i])});
    }
    out.close();
}

void write_breakpoints_csv(const std::vector<EnvelopeBreakpoint>& breakpoints,
                           const std::filesystem::path& path) {
    csv::Writer out(path, {"lambda", "slope_before", "slope_after"});
    for (const auto& b : breakpoints) {
        out.row({csv::format_exact(b.lambda), std::to_string(b.slope_before),
                 std::to_string(b.slope_after)});
    }
    out.close();
}

} // namespace landscape
