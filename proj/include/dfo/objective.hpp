#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dfo/search_space.hpp"

namespace dfo {

/// Black-box loss function to minimize. Must be deterministic; must be safe
/// for concurrent invocation only when batch evaluation is enabled.
using Objective = std::function<double(const std::vector<double>&)>;

/// Counts distinct objective calls made during one run.
struct EvalCounter {
  std::size_t count = 0;
};

/// Evaluates one candidate, caching the loss on it. A candidate that already
/// carries a loss is returned unchanged and costs nothing. Throws
/// NonFiniteLossError when the objective returns NaN or infinity.
Candidate evaluate(const Objective& objective, Candidate c, EvalCounter& counter);

}  // namespace dfo
