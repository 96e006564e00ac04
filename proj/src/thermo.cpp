#include "landscape/thermo.hpp"

#include "landscape/csv.hpp"
#include "landscape/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

namespace landscape {

namespace {

void require_lambda(double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw InvalidArgument(fmt::format("lambda must be finite and >= 0, got {}", lambda));
    }
}

void require_positive_temperature(double temperature) {
    if (!std::isfinite(temperature) || !(temperature > 0.0)) {
        throw InvalidArgument(fmt::format("temperature must be finite and > 0, got {}", temperature));
    }
}

double variance_of(std::span<const double> probabilities, std::span<const double> values) {
    double mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) mean += probabilities[i] * values[i];
    double var = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - mean;
        var += probabilities[i] * d * d;
    }
    return var;
}

std::vector<double> complexities_of(const ModelSpace& space) {
    std::vector<double> out;
    out.reserve(space.size());
    for (const auto& p : space) out.push_back(static_cast<double>(p.complexity));
    return out;
}

} // namespace

double action(const ModelPoint& point, double lambda) noexcept {
    return point.train_loss + lambda * static_cast<double>(point.complexity);
}

std::vector<double> actions(const ModelSpace& space, double lambda) {
    std::vector<double> out;
    out.reserve(space.size());
    for (const auto& p : space) out.push_back(action(p, lambda));
    return out;
}

ZeroTemperatureFreeEnergy free_energy_zero_T(const ModelSpace& space, double lambda) {
    require_lambda(lambda);
    ZeroTemperatureFreeEnergy best{action(space[0], lambda), space[0].complexity, 0};
    // increasing complexity with strict '<' keeps the smaller complexity on ties
    for (std::size_t i = 1; i < space.size(); ++i) {
        const double a = action(space[i], lambda);
        if (a < best.free_energy) best = {a, space[i].complexity, i};
    }
    return best;
}

GibbsDistribution gibbs_from_actions(std::span<const double> actions, double temperature) {
    require_positive_temperature(temperature);
    if (actions.empty()) throw InvalidArgument("gibbs: no states");
    const double floor = *std::min_element(actions.begin(), actions.end());
    if (!std::isfinite(floor)) throw NumericalError("gibbs: non-finite action");

    GibbsDistribution g;
    g.params.temperature = temperature;
    g.probabilities.resize(actions.size());
    double total = 0.0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (!std::isfinite(actions[i])) throw NumericalError("gibbs: non-finite action");
        g.probabilities[i] = std::exp(-(actions[i] - floor) / temperature);
        total += g.probabilities[i];
    }
    for (auto& p : g.probabilities) p /= total;
    g.log_Z = -floor / temperature + std::log(total);
    return g;
}

GibbsDistribution gibbs(const ModelSpace& space, const ActionParams& params) {
    require_lambda(params.lambda);
    auto g = gibbs_from_actions(actions(space, params.lambda), params.temperature);
    g.params = params;
    return g;
}

double free_energy_T(const ModelSpace& space, const ActionParams& params) {
    require_lambda(params.lambda);
    require_positive_temperature(params.temperature);
    const auto a = actions(space, params.lambda);
    const double floor = *std::min_element(a.begin(), a.end());
    double total = 0.0;
    for (double v : a) total += std::exp(-(v - floor) / params.temperature);
    // -T log Z with the shift applied outside the logarithm
    return floor - params.temperature * std::log(total);
}

double mean_complexity(const ModelSpace& space, const GibbsDistribution& distribution) {
    double mean = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        mean += distribution.probabilities[i] * static_cast<double>(space[i].complexity);
    }
    return mean;
}

double susceptibility(const ModelSpace& space, const ActionParams& params) {
    const auto g = gibbs(space, params);
    return variance_of(g.probabilities, complexities_of(space));
}

ResonanceReport resonance_two_state(const ModelPoint& first, const ModelPoint& second) {
    if (first.complexity == second.complexity) {
        throw InvalidArgument("resonance_two_state: complexities must differ");
    }
    ResonanceReport report;
    const double c1 = first.complexity;
    const double c2 = second.complexity;
    const double lambda_star = (first.train_loss - second.train_loss) / (c2 - c1);
    if (lambda_star > 0.0 && std::isfinite(lambda_star)) {
        const double gap = std::abs(c1 - c2);
        report.lambda_star = lambda_star;
        report.chi_peak = gap * gap / 4.0;
        report.peak_width_estimate = 4.0 * std::acosh(std::sqrt(2.0)) / gap;
        report.participating_complexities = {std::min(first.complexity, second.complexity),
                                             std::max(first.complexity, second.complexity)};
    }
    return report;
}

double kstate_chi_expansion(std::span<const int> complexities, double epsilon) {
    if (complexities.size() < 2) throw InvalidArgument("k-state expansion needs k >= 2");
    const double k = static_cast<double>(complexities.size());
    double mean = 0.0;
    for (int c : complexities) mean += c;
    mean /= k;
    double second = 0.0, fourth = 0.0;
    for (int c : complexities) {
        const double d = c - mean;
        second += d * d;
        fourth += d * d * d * d;
    }
    return second / k - epsilon * epsilon * fourth / k;
}

double degenerate_susceptibility(std::span<const int> complexities, double epsilon) {
    if (complexities.size() < 2) throw InvalidArgument("degenerate system needs k >= 2");
    std::vector<double> values(complexities.begin(), complexities.end());
    std::vector<double> tilt(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) tilt[i] = epsilon * values[i];
    const auto g = gibbs_from_actions(tilt, 1.0);
    return variance_of(g.probabilities, values);
}

double degenerate_chi_fwhm(std::span<const int> complexities) {
    if (complexities.size() < 2) throw InvalidArgument("degenerate system needs k >= 2");
    std::vector<int> sorted(complexities.begin(), complexities.end());
    std::sort(sorted.begin(), sorted.end());
    int min_gap = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const int gap = sorted[i] - sorted[i - 1];
        if (gap > 0 && (min_gap == 0 || gap < min_gap)) min_gap = gap;
    }
    if (min_gap == 0) throw InvalidArgument("degenerate_chi_fwhm: all complexities equal");

    const auto chi = [&](double eps) { return degenerate_susceptibility(complexities, eps); };

    // Beyond |eps| = 60 / min_gap every non-extreme weight is below e^-60.
    const double reach = 60.0 / min_gap;
    constexpr int kGrid = 24000;
    const double step = 2.0 * reach / kGrid;
    int peak = 0;
    double peak_value = -1.0;
    for (int i = 0; i <= kGrid; ++i) {
        const double v = chi(-reach + i * step);
        if (v > peak_value) {
            peak_value = v;
            peak = i;
        }
    }

    // golden-section refinement of the maximum
    double lo = -reach + (peak - 1) * step;
    double hi = -reach + (peak + 1) * step;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
        const double a = hi - ratio * (hi - lo);
        const double b = lo + ratio * (hi - lo);
        if (chi(a) < chi(b)) lo = a; else hi = b;
    }
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * std::max(chi(centre), peak_value);

    const auto crossing = [&](double direction) {
        double inside = centre;
        double outside = centre + direction * step;
        while (chi(outside) >= half) {
            inside = outside;
            outside += direction * step;
            if (std::abs(outside - centre) > 4.0 * reach) {
                throw NumericalError("degenerate_chi_fwhm: no half-maximum crossing");
            }
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (inside + outside);
            if (mid == inside || mid == outside) break;
            (chi(mid) >= half ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };
    return crossing(+1.0) - crossing(-1.0);
}

FreeEnergyCurve sweep_lambda(const ModelSpace& space, std::span<const double> lambdas,
                             double temperature) {
    if (!std::isfinite(temperature) || temperature < 0.0) {
        throw InvalidArgument(fmt::format("temperature must be finite and >= 0, got {}", temperature));
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!std::isfinite(lambdas[i]) || lambdas[i] < 0.0) {
            throw InvalidArgument(fmt::format("lambda[{}] = {} is not a finite value >= 0", i, lambdas[i]));
        }
        if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
            throw InvalidArgument(fmt::format("lambda[{}] = {} does not increase", i, lambdas[i]));
        }
    }

    const std::size_t n = lambdas.size();
    FreeEnergyCurve curve;
    curve.temperature = temperature;
    curve.lambdas.assign(lambdas.begin(), lambdas.end());
    curve.F.assign(n, 0.0);
    curve.mean_comp.assign(n, 0.0);
    curve.chi.assign(n, 0.0);
    const auto values = complexities_of(space);

    const auto evaluate = [&](std::size_t i) {
        const double lambda = lambdas[i];
        if (temperature == 0.0) {
            const auto z = free_energy_zero_T(space, lambda);
            curve.F[i] = z.free_energy;
            curve.mean_comp[i] = z.complexity;
            return;
        }
        const auto g = gibbs(space, {lambda, temperature});
        curve.F[i] = free_energy_T(space, {lambda, temperature});
        curve.mean_comp[i] = mean_complexity(space, g);
        curve.chi[i] = variance_of(g.probabilities, values);
    };

    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), (n + 63) / 64);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) evaluate(i);
        return curve;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) evaluate(i);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return curve;
}

void write_curve_csv(const FreeEnergyCurve& curve, const std::filesystem::path& path) {
    csv::Writer out(path, {"lambda", "F", "mean_comp", "chi"});
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
        out.row({csv::format_exact(curve.lambdas[i]), csv::format_exact(curve.F[i]),
                 csv::format_exact(curve.mean_comp[i]), csv::format_exact(curve.chi[i])});
    }
    out.close();
}

} // namespace landscape
