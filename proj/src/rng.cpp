#include "landscape/rng.hpp"

#include <cmath>
#include <numbers>

namespace landscape {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept
    : key_(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x632be59bd9b4e019ULL)),
      counter_(counter) {}

std::uint64_t CounterRng::hash(std::uint64_t key, std::uint64_t counter) noexcept {
    // two rounds so that adjacent counters decorrelate fully
    return mix64(mix64(key + counter * kGolden) ^ counter);
}

std::uint64_t CounterRng::next_u64() noexcept { return hash(key_, counter_++); }

double CounterRng::next_uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_uniform_open_zero() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::next_normal() noexcept {
    const double u1 = next_uniform_open_zero();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::next_below(std::uint64_t bound) noexcept {
    // 128-bit multiply-shift; bias is below 2^-64 * bound
    __extension__ using u128 = unsigned __int128;
    const auto wide = static_cast<u128>(next_u64()) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
}

} // namespace landscape
