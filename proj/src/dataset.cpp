#include "landscape/dataset.hpp"

#include "landscape/csv.hpp"
#include "landscape/errors.hpp"
#include "landscape/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace landscape {

double target_function(int freq_n, double x) noexcept {
    return std::sin(2.0 * freq_n * std::numbers::pi * x);
}

std::string Dataset::identifier() const {
    return fmt::format("sin(2*{}*pi*x) n_train={} n_test={} sigma={} seed={}", freq_n, n_train(),
                       n_test(), csv::format_sig(noise_sigma, 9), seed);
}

Dataset generate_dataset(std::size_t n_train, std::size_t n_test, int freq_n, double noise_sigma,
                         std::uint64_t seed) {
    if (n_train < 2) throw InvalidArgument(fmt::format("n_train must be >= 2, got {}", n_train));
    if (n_test < 1) throw InvalidArgument("n_test must be >= 1");
    if (freq_n < 1) throw InvalidArgument(fmt::format("freq_n must be >= 1, got {}", freq_n));
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw InvalidArgument(fmt::format("noise_sigma must be finite and >= 0, got {}", noise_sigma));
    }

    Dataset d;
    d.freq_n = freq_n;
    d.noise_sigma = noise_sigma;
    d.seed = seed;

    d.xs.resize(n_train);
    const double last = static_cast<double>(n_train - 1);
    for (std::size_t i = 0; i < n_train; ++i) d.xs[i] = static_cast<double>(i) / last;

    CounterRng train_noise(seed, Stream::TrainNoise);
    d.ys_clean.resize(n_train);
    d.ys_train.resize(n_train);
    for (std::size_t i = 0; i < n_train; ++i) {
        d.ys_clean[i] = target_function(freq_n, d.xs[i]);
        d.ys_train[i] = noise_sigma == 0.0 ? d.ys_clean[i]
                                           : d.ys_clean[i] + noise_sigma * train_noise.next_normal();
    }

    CounterRng abscissae(seed, Stream::TestAbscissae);
    d.xs_test.resize(n_test);
    for (auto& x : d.xs_test) x = abscissae.next_uniform();
    std::sort(d.xs_test.begin(), d.xs_test.end());

    CounterRng test_noise(seed, Stream::TestNoise);
    d.ys_test_clean.resize(n_test);
    d.ys_test_noisy.resize(n_test);
    for (std::size_t i = 0; i < n_test; ++i) {
        d.ys_test_clean[i] = target_function(freq_n, d.xs_test[i]);
        d.ys_test_noisy[i] = noise_sigma == 0.0
                                 ? d.ys_test_clean[i]
                                 : d.ys_test_clean[i] + noise_sigma * test_noise.next_normal();
    }
    return d;
}

void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path) {
    csv::Writer out(path, {"split", "x", "y_noisy", "y_clean"});
    for (std::size_t i = 0; i < dataset.n_train(); ++i) {
        out.row({"train", csv::format_exact(dataset.xs[i]), csv::format_exact(dataset.ys_train[i]),
                 csv::format_exact(dataset.ys_clean[i])});
    }
    for (std::size_t i = 0; i < dataset.n_test(); ++i) {
        out.row({"test", csv::format_exact(dataset.xs_test[i]),
                 csv::format_exact(dataset.ys_test_noisy[i]),
                 csv::format_exact(dataset.ys_test_clean[i])});
    }
    out.close();
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto split = table.column("split");
    const auto x = table.column("x");
    const auto noisy = table.column("y_noisy");
    const auto clean = table.column("y_clean");

    Dataset d;
    for (const auto& row : table.rows) {
        const double xv = csv::parse_double(row[x]);
        const double yn = csv::parse_double(row[noisy]);
        const double yc = csv::parse_double(row[clean]);
        if (row[split] == "train") {
            d.xs.push_back(xv);
            d.ys_train.push_back(yn);
            d.ys_clean.push_back(yc);
        } else if (row[split] == "test") {
            d.xs_test.push_back(xv);
            d.ys_test_noisy.push_back(yn);
            d.ys_test_clean.push_back(yc);
        } else {
            throw IoError(fmt::format("'{}': unknown split '{}'", path.string(), row[split]));
        }
    }
    if (d.xs.size() < 2) throw IoError(fmt::format("'{}': fewer than 2 train rows", path.string()));
    for (std::size_t i = 0; i < d.xs.size(); ++i) {
        if (d.xs[i] < 0.0 || d.xs[i] > 1.0 || (i > 0 && !(d.xs[i] > d.xs[i - 1]))) {
            throw IoError(fmt::format("'{}': train x must be strictly increasing in [0,1]",
                                      path.string()));
        }
    }
    return d;
}

} // namespace landscape
