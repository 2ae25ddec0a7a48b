#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dfo/search_space.hpp"
#include "dfo/stop.hpp"

namespace dfo {

/// One improvement event: the best loss seen after `evals` objective calls.
struct TracePoint {
  std::size_t evals = 0;
  double best_loss = 0.0;
};

/// Seeded, reproducible history of one optimizer run. `history` holds the
/// improvement staircase: eval counts strictly increasing, best losses
/// strictly decreasing, first entry at the first evaluation.
struct RunTrace {
  std::uint64_t seed = 0;
  std::string algorithm_id;
  std::vector<TracePoint> history;
  Candidate best;
  std::size_t total_evals = 0;
  StopReason stop_reason = StopReason::MaxEvals;
};

}  // namespace dfo
