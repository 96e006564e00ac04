#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace landscape {

/// Noisy samples of sin(2 n pi x) on [0, 1] with held-out test arrays.
///
/// Train abscissae are equally spaced with both endpoints included. Test
/// abscissae are uniform draws on [0, 1], sorted. Train noise, test
/// abscissae and test noise come from independent counter-RNG streams keyed
/// on `seed`, so the same arguments always give a bit-identical dataset.
struct Dataset {
    std::vector<double> xs;
    std::vector<double> ys_train;
    std::vector<double> ys_clean;
    std::vector<double> xs_test;
    std::vector<double> ys_test_clean;
    std::vector<double> ys_test_noisy;
    int freq_n = 0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    std::size_t n_train() const noexcept { return xs.size(); }
    std::size_t n_test() const noexcept { return xs_test.size(); }

    /// Short provenance string, e.g. "sin(2*3*pi*x) n_train=256 sigma=0.25 seed=11".
    std::string identifier() const;
};

double target_function(int freq_n, double x) noexcept;

Dataset generate_dataset(std::size_t n_train, std::size_t n_test, int freq_n, double noise_sigma,
                         std::uint64_t seed);

// CSV schema: header "split,x,y_noisy,y_clean"; split is "train" or "test".
// Values are written with 17 significant digits so import is lossless.
// freq_n, noise_sigma and seed are not part of the file; an imported
// dataset carries zeros there.
void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

} // namespace landscape
