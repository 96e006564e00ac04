#include "landscape/dataset.hpp"
#include "landscape/errors.hpp"
#include "landscape/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numeric>

using namespace landscape;

TEST_CASE("counter rng is a pure function of key and counter") {
    CounterRng a(42, Stream::TrainNoise);
    CounterRng b(42, Stream::TrainNoise);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    CounterRng skipped(42, Stream::TrainNoise, 50);
    CounterRng walked(42, Stream::TrainNoise);
    for (int i = 0; i < 50; ++i) walked.next_u64();
    CHECK(skipped.next_u64() == walked.next_u64());

    CounterRng other_stream(42, Stream::TestNoise);
    CounterRng same(42, Stream::TrainNoise);
    CHECK(other_stream.next_u64() != same.next_u64());
}

TEST_CASE("counter rng uniform and normal moments") {
    CounterRng rng(7, Stream::TrainNoise);
    constexpr int n = 200000;
    double sum = 0, sum_sq = 0, usum = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        usum += u;
        const double z = rng.next_normal();
        sum += z;
        sum_sq += z * z;
    }
    CHECK(usum / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.02));

    CounterRng bounded(3, 9);
    for (int i = 0; i < 1000; ++i) CHECK(bounded.next_below(7) < 7u);
}

TEST_CASE("zero-noise dataset is the sine itself") {
    const auto d = generate_dataset(5, 3, 1, 0.0, 7);
    const double expected[] = {0.0, 1.0, 0.0, -1.0, 0.0};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(d.xs[i] == doctest::Approx(0.25 * i));
        CHECK(std::abs(d.ys_train[i] - expected[i]) < 1e-12);
        CHECK(d.ys_train[i] == d.ys_clean[i]);
    }
    CHECK(d.xs.front() == 0.0);
    CHECK(d.xs.back() == 1.0);
    for (std::size_t i = 0; i < d.n_test(); ++i) CHECK(d.ys_test_noisy[i] == d.ys_test_clean[i]);
}

TEST_CASE("dataset invariants and determinism") {
    const auto a = generate_dataset(64, 100, 3, 0.2, 1);
    const auto b = generate_dataset(64, 100, 3, 0.2, 1);
    REQUIRE(a.xs.size() == 64);
    CHECK(std::memcmp(a.ys_train.data(), b.ys_train.data(), 64 * sizeof(double)) == 0);
    CHECK(std::memcmp(a.xs_test.data(), b.xs_test.data(), 100 * sizeof(double)) == 0);
    CHECK(std::memcmp(a.ys_test_noisy.data(), b.ys_test_noisy.data(), 100 * sizeof(double)) == 0);

    for (std::size_t i = 0; i < a.n_train(); ++i) {
        CHECK(a.xs[i] >= 0.0);
        CHECK(a.xs[i] <= 1.0);
        if (i) CHECK(a.xs[i] > a.xs[i - 1]);
        CHECK(a.ys_clean[i] == doctest::Approx(std::sin(6.0 * M_PI * a.xs[i])));
    }
    for (std::size_t i = 0; i < a.n_test(); ++i) {
        CHECK(a.xs_test[i] >= 0.0);
        CHECK(a.xs_test[i] < 1.0);
    }

    const auto c = generate_dataset(64, 100, 3, 0.2, 2);
    CHECK(c.ys_train != a.ys_train);
    // train and test noise come from independent streams
    double train_noise_mean = 0;
    for (std::size_t i = 0; i < a.n_train(); ++i) train_noise_mean += a.ys_train[i] - a.ys_clean[i];
    CHECK(std::abs(train_noise_mean / 64) < 0.1);
}

TEST_CASE("generate_dataset rejects bad arguments") {
    CHECK_THROWS_AS(generate_dataset(1, 10, 1, 0.1, 0), InvalidArgument);
    CHECK_THROWS_AS(generate_dataset(10, 10, 1, -0.1, 0), InvalidArgument);
    CHECK_THROWS_AS(generate_dataset(10, 10, 0, 0.1, 0), InvalidArgument);
}

TEST_CASE("dataset csv round trip is lossless") {
    const auto d = generate_dataset(16, 8, 2, 0.3, 99);
    const auto path = std::filesystem::temp_directory_path() / "landscape_dataset_roundtrip.csv";
    write_dataset_csv(d, path);
    const auto back = read_dataset_csv(path);
    CHECK(back.xs == d.xs);
    CHECK(back.ys_train == d.ys_train);
    CHECK(back.ys_clean == d.ys_clean);
    CHECK(back.xs_test == d.xs_test);
    CHECK(back.ys_test_noisy == d.ys_test_noisy);
    CHECK(back.ys_test_clean == d.ys_test_clean);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(read_dataset_csv("/nonexistent/dir/x.csv"), IoError);
}
