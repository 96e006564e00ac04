#pragma once

#include "landscape/model_space.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace landscape {

/// Lagrange multiplier and temperature of the action ensemble.
struct ActionParams {
    double lambda = 0.0;
    double temperature = 1.0; // 0 selects exact minimisation
};

/// A_lambda(S) = Loss(S) + lambda * Comp(S), on the train loss.
double action(const ModelPoint& point, double lambda) noexcept;

std::vector<double> actions(const ModelSpace& space, double lambda);

struct ZeroTemperatureFreeEnergy {
    double free_energy = 0.0;
    int complexity = 0;     // d*(lambda); ties go to the smaller complexity
    std::size_t index = 0;  // position of the winner in the space
};

/// Exact minimum of the action over the space.
ZeroTemperatureFreeEnergy free_energy_zero_T(const ModelSpace& space, double lambda);

struct GibbsDistribution {
    std::vector<double> probabilities;
    double log_Z = 0.0;
    ActionParams params;
};

/// pi(S) proportional to exp(-A/T), evaluated with the minimum action shifted
/// out so no exponential overflows for finite actions.
GibbsDistribution gibbs(const ModelSpace& space, const ActionParams& params);
GibbsDistribution gibbs_from_actions(std::span<const double> actions, double temperature);

/// -T log Z(lambda, T).
double free_energy_T(const ModelSpace& space, const ActionParams& params);

double mean_complexity(const ModelSpace& space, const GibbsDistribution& distribution);

/// Var[Comp] under the Gibbs distribution. Equals -d^2 F / d lambda^2 at T = 1.
double susceptibility(const ModelSpace& space, const ActionParams& params);

struct ResonanceReport {
    std::optional<double> lambda_star;
    double chi_peak = 0.0;
    std::optional<double> peak_width_estimate;
    std::vector<int> participating_complexities;
};

/// Crossing of the two action lines at lambda* = (L1 - L2) / (C2 - C1) > 0.
/// At T = 1 the susceptibility there is (C1 - C2)^2 / 4 and its full width at
/// half maximum is 4 acosh(sqrt 2) / |C1 - C2|. Without a positive crossing
/// one model dominates for every lambda and no resonance is reported.
ResonanceReport resonance_two_state(const ModelPoint& first, const ModelPoint& second);

/// Quadratic small-epsilon expansion of the susceptibility of k tied states:
///   (1/k) sum (C_i - Cbar)^2 - (eps^2 / k) sum (C_i - Cbar)^4.
/// Matches the exact curve to O(eps^3) only when k = 2; see
/// degenerate_susceptibility for the exact value.
double kstate_chi_expansion(std::span<const int> complexities, double epsilon);

/// Exact Var[C] for k tied states at lambda* + epsilon, T = 1 (weights exp(-eps C_i)).
double degenerate_susceptibility(std::span<const int> complexities, double epsilon);

/// Full width at half maximum, in epsilon, of degenerate_susceptibility.
/// Requires at least two distinct complexities.
double degenerate_chi_fwhm(std::span<const int> complexities);

struct FreeEnergyCurve {
    std::vector<double> lambdas;
    std::vector<double> F;
    std::vector<double> mean_comp;
    std::vector<double> chi;
    double temperature = 0.0;
};

/// Sweeps lambda. At T = 0 fills F with the exact minimum, mean_comp with the
/// winning complexity and chi with zeros; at T > 0 fills F = -T log Z,
/// <Comp> and Var[Comp]. Lambda values are evaluated in parallel, each
/// independently, so results do not depend on the thread count.
FreeEnergyCurve sweep_lambda(const ModelSpace& space, std::span<const double> lambdas,
                             double temperature);

// CSV schema: lambda,F,mean_comp,chi
void write_curve_csv(const FreeEnergyCurve& curve, const std::filesystem::path& path);

} // namespace landscape
