#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>

namespace fdx {

// splitmix64 finalizer; used to derive independent stream seeds from
// (seed, index, ...) tuples so parallel evaluation order cannot change results.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <class... Parts>
constexpr std::uint64_t mix_seed(std::uint64_t seed, Parts... parts) noexcept {
  std::uint64_t h = splitmix64(seed);
  ((h = splitmix64(h ^ (static_cast<std::uint64_t>(parts) + 0x9e3779b97f4a7c15ULL))), ...);
  return h;
}

template <class... Parts>
std::mt19937_64 make_rng(std::uint64_t seed, Parts... parts) {
  return std::mt19937_64(mix_seed(seed, parts...));
}

// Unbiased draw from {0, ..., n-1} via rejection sampling.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

inline double uniform01(std::mt19937_64& rng) {  // [0,1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform01_open(std::mt19937_64& rng) {  // (0,1]
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Box-Muller; implementation-pinned so streams are stable across standard libraries.
inline double normal_draw(std::mt19937_64& rng) {
  const double u1 = uniform01_open(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Fisher-Yates shuffle driven by bounded() draws.
template <class T>
void shuffle_values(std::span<T> values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace fdx
