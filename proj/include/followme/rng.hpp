#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace followme {

/// Deterministic random stream. All draws are derived from raw mt19937_64
/// output with fixed arithmetic, so identical seeds give bit-identical
/// sequences on every platform (the std distributions make no such promise).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  /// Independent child stream identified by a label, e.g. derive(seed, "demo").
  static RngStream derive(std::uint64_t seed, std::string_view tag);

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return lo + static_cast<std::uint64_t>(uniform() * static_cast<double>(hi - lo + 1));
  }

  /// Zero-mean gaussian via Box-Muller (no cached spare draw).
  double gaussian(double sigma) {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643 * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace followme
