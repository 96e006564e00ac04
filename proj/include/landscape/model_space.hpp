#pragma once

#include "landscape/dataset.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace landscape {

enum class Family { Polynomial, Fourier, Tree };

std::string_view to_string(Family family) noexcept;
std::optional<Family> parse_family(std::string_view text) noexcept;

/// Complexity proxy for index d: d + 1 coefficients, 2d + 1 Fourier
/// coefficients, or tree depth d.
int family_complexity(Family family, int index) noexcept;

/// One candidate model summarised by its complexity and raw SSE losses.
struct ModelPoint {
    int complexity = 0;
    double train_loss = 0.0;
    double test_loss_clean = 0.0;
    double test_loss_noisy = 0.0;
    Family family = Family::Polynomial;
    int param_index = 0;
};

/// Candidate models of one family, ordered by strictly increasing complexity.
class ModelSpace {
public:
    /// Throws InvalidArgument if empty, if complexities are not strictly
    /// increasing, or if any loss is negative or non-finite.
    explicit ModelSpace(std::vector<ModelPoint> points, std::string dataset_ref = {});

    const std::vector<ModelPoint>& points() const noexcept { return points_; }
    const ModelPoint& operator[](std::size_t i) const { return points_[i]; }
    std::size_t size() const noexcept { return points_.size(); }
    const std::string& dataset_ref() const noexcept { return dataset_ref_; }

    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }

private:
    std::vector<ModelPoint> points_;
    std::string dataset_ref_;
};

ModelPoint fit_polynomial(const Dataset& dataset, int degree);
ModelPoint fit_fourier(const Dataset& dataset, int max_mode);
ModelPoint fit_tree(const Dataset& dataset, int depth);
ModelPoint fit_model(const Dataset& dataset, Family family, int index);

/// Largest index the family accepts on this dataset.
int max_admissible_index(const Dataset& dataset, Family family) noexcept;

/// Fits indices 0..max_index and returns them as a ModelSpace.
ModelSpace enumerate_space(const Dataset& dataset, Family family, int max_index);

// CSV schema: complexity,param_index,train_sse,test_sse_clean,test_sse_noisy
void write_space_csv(const ModelSpace& space, const std::filesystem::path& path);
/// Reads the schema above; only `complexity` and `train_sse` are required.
ModelSpace read_space_csv(const std::filesystem::path& path);

} // namespace landscape
