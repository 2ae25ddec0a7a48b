#include "dfo/objective.hpp"

#include <cmath>

#include "dfo/errors.hpp"

namespace dfo {

Candidate evaluate(const Objective& objective, Candidate c, EvalCounter& counter) {
  if (c.loss) return c;
  const double loss = objective(c.values);
  ++counter.count;
  if (!std::isfinite(loss))
    throw NonFiniteLossError("objective returned a non-finite loss", c.values);
  c.loss = loss;
  return c;
}

}  // namespace dfo
