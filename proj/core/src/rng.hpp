#pragma once

// Deterministic random draws built directly on the mt19937_64 output stream.
// std::normal_distribution and std::shuffle are implementation-defined, so
// everything that must reproduce bit-for-bit across toolchains is hand-rolled
// here instead.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace lrmc::detail {

inline double uniform01(std::mt19937_64& gen) {
  // 53-bit mantissa in [0, 1)
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller. Draws two uniforms per call.
inline double standard_normal(std::mt19937_64& gen) {
  double u1 = uniform01(gen);
  const double u2 = uniform01(gen);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform draw from [0, bound). Modulo bias is irrelevant here; the fixed
/// mapping from the engine stream is what matters.
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t bound) {
  return gen() % bound;
}

}  // namespace lrmc::detail
