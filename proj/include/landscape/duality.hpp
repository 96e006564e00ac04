#pragma once

#include "landscape/model_space.hpp"
#include "landscape/thermo.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace landscape {

/// h(alpha) = min { train loss : Comp <= alpha }, sampled at each complexity
/// of the generating space. Nonincreasing in alpha.
struct StructureFunction {
    std::vector<int> alphas;
    std::vector<double> h;
    std::string source_tag;
};

StructureFunction structure_function(const ModelSpace& space);

/// min over the support of lambda * alpha + h(alpha); the extension is +inf
/// off the support. Evaluated in increasing alpha with the same arithmetic as
/// action(), so it agrees bit-for-bit with free_energy_zero_T on the
/// generating space.
double fenchel_h_to_F(const StructureFunction& sf, double lambda);

/// max over the curve's lambda grid of F(lambda) - lambda * alpha. Exact when
/// the grid contains every breakpoint of F and a point beyond the last one;
/// the result is the lower convex envelope of h at alpha, which equals h only
/// where (alpha, h(alpha)) is a vertex of that envelope. Rejects T > 0 curves.
double fenchel_F_to_h(const FreeEnergyCurve& curve, int alpha);

/// A kink of F: for lambda just below, the winner has complexity
/// `slope_before`; just above, `slope_after` < `slope_before`.
struct EnvelopeBreakpoint {
    double lambda = 0.0;
    int slope_before = 0;
    int slope_after = 0;
};

/// All breakpoints of F(lambda) = min_C (L + lambda C) for lambda > 0, from
/// the lower convex hull of the (complexity, loss) points. Collinear hull
/// points collapse into one breakpoint. Sorted by increasing lambda.
std::vector<EnvelopeBreakpoint> detect_kinks(const ModelSpace& space);

/// Complexity with the smallest noisy test loss; ties go to the smaller one.
int elbow_from_test_loss(const ModelSpace& space);

// CSV schemas: alpha,h  and  lambda,slope_before,slope_after
void write_structure_function_csv(const StructureFunction& sf, const std::filesystem::path& path);
void write_breakpoints_csv(const std::vector<EnvelopeBreakpoint>& breakpoints,
                           const std::filesystem::path& path);

} // namespace landscape
