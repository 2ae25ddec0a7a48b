#pragma once

#include <cstdint>
#include <random>

namespace dfo {

/// Seeded source of randomness shared by one optimizer run.
///
/// All stochastic operators draw from a single stream in a documented fixed
/// order, so a run is fully reproducible from its seed. The engine is
/// mt19937_64 (bit-exact by the C++ standard); the real-valued transforms
/// below are hand-rolled because the std distributions are implementation
/// defined. uniform() and uniform_int() are pure integer arithmetic and
/// therefore portable bit-for-bit; normal() additionally depends on libm's
/// log/sin/cos rounding.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Uniform integer in [a, b], both ends inclusive. Unbiased via rejection.
  std::int64_t uniform_int(std::int64_t a, std::int64_t b);

  /// Standard normal deviate (Box-Muller; the second deviate of each pair is
  /// cached and returned by the next call).
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dfo
