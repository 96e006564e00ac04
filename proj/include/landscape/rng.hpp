#pragma once

#include <cstdint>

namespace landscape {

// Independent draw streams derived from one user seed.
enum class Stream : std::uint64_t {
    TrainNoise = 1,
    TestAbscissae = 2,
    TestNoise = 3,
    Chain = 4,
    ChainInit = 5,
};

/// Counter-based generator: draw k of stream s under seed is a pure function
/// of (seed, s, k). Two generators with the same key and counter produce the
/// same values on every platform.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter = 0) noexcept;
    CounterRng(std::uint64_t seed, Stream stream, std::uint64_t counter = 0) noexcept
        : CounterRng(seed, static_cast<std::uint64_t>(stream), counter) {}

    static std::uint64_t hash(std::uint64_t key, std::uint64_t counter) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform in [0, 1) with 53 bits of resolution.
    double next_uniform() noexcept;
    /// Uniform in (0, 1].
    double next_uniform_open_zero() noexcept;
    /// Standard normal via Box-Muller; consumes two draws.
    double next_normal() noexcept;
    /// Uniform integer in [0, bound); bound > 0.
    std::uint64_t next_below(std::uint64_t bound) noexcept;

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace landscape
