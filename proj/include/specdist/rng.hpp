#pragma once

// Counter-based random streams.
//
// Every random quantity in the library is derived from a 64-bit key built by
// hashing a tuple of integers with the SplitMix64 finalizer:
//
//   mix64(z):  z += 0x9E3779B97F4A7C15
//              z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//              z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
//              return z ^ (z >> 31)
//
//   mix(a, b, ...) = mix64(... mix64(mix64(a) ^ b) ^ ...)
//
// A CounterStream seeded with a key yields mix64(key + k * golden) for
// k = 0, 1, 2, ... (the SplitMix64 sequence). Entry (i, j) of a matrix with seed
// s uses the stream keyed by mix(s, i, j), so results never depend on the
// order in which entries are visited or on how work is split across threads.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace specdist {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += kGoldenGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a) noexcept { return mix64(a); }

template <typename... Rest>
constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, Rest... rest) noexcept {
  return mix(mix64(a) ^ b, static_cast<std::uint64_t>(rest)...);
}

class CounterStream {
 public:
  explicit constexpr CounterStream(std::uint64_t key) noexcept : state_(key) {}

  constexpr std::uint64_t next() noexcept {
    state_ += kGoldenGamma;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  double normal() noexcept { return normal_pair().first; }

  // Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 handled by boosting.
  double gamma(double shape) noexcept {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace specdist
