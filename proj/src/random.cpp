#include "dfo/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dfo {

std::int64_t RandomStream::uniform_int(std::int64_t a, std::int64_t b) {
  if (a > b) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span =
      static_cast<std::uint64_t>(b) - static_cast<std::uint64_t>(a) + 1;
  if (span == 0) {  // full 2^64 range
    return static_cast<std::int64_t>(engine_());
  }
  // Reject draws from the incomplete final bucket so every value in
  // [a, b] is equally likely.
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % span + 1) % span;
  std::uint64_t draw = engine_();
  while (draw > limit) draw = engine_();
  return a + static_cast<std::int64_t>(draw % span);
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();  // log(0) guard
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace dfo
