#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dfo/errors.hpp"
#include "dfo/objective.hpp"
#include "dfo/run_context.hpp"
#include "dfo/search_space.hpp"
#include "dfo/stop.hpp"

using namespace dfo;

namespace {
double sphere(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}
}  // namespace

TEST_CASE("degenerate boxes are rejected at construction") {
  CHECK_THROWS_AS(SearchSpace::continuous(2, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SearchSpace::continuous(2, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SearchSpace::binary(0), std::invalid_argument);
  CHECK_THROWS_AS(SearchSpace::continuous({}, {}), std::invalid_argument);
}

TEST_CASE("sample_uniform binary bit mean") {
  SearchSpace space = SearchSpace::binary(8);
  RandomStream rng(11);
  const int n = 125000;  // 125000 * 8 bits = 1e6 draws
  long double ones = 0.0L;
  for (int i = 0; i < n; ++i) {
    Candidate c = sample_uniform(space, rng);
    REQUIRE(c.values.size() == 8);
    REQUIRE_FALSE(c.loss.has_value());
    for (double b : c.values) {
      REQUIRE((b == 0.0 || b == 1.0));
      ones += b;
    }
  }
  CHECK(std::abs(static_cast<double>(ones) / (n * 8.0) - 0.5) < 0.002);
}

TEST_CASE("sample_uniform box per-coordinate mean") {
  SearchSpace space = SearchSpace::continuous(2, 0.0, 1.0);
  RandomStream rng(12);
  const int n = 1000000;
  long double sums[2] = {0.0L, 0.0L};
  for (int i = 0; i < n; ++i) {
    Candidate c = sample_uniform(space, rng);
    REQUIRE(space.contains(c.values));
    sums[0] += c.values[0];
    sums[1] += c.values[1];
  }
  CHECK(std::abs(static_cast<double>(sums[0]) / n - 0.5) < 0.002);
  CHECK(std::abs(static_cast<double>(sums[1]) / n - 0.5) < 0.002);
}

TEST_CASE("clamp projects onto the box") {
  SearchSpace unit = SearchSpace::continuous(2, 0.0, 1.0);
  CHECK(clamp(unit, {0.5, 0.5}) == std::vector<double>{0.5, 0.5});
  CHECK(clamp(unit, {-3.0, 2.0}) == std::vector<double>{0.0, 1.0});
  SearchSpace wide = SearchSpace::continuous(1, -5.0, 5.0);
  CHECK(clamp(wide, {5.0}) == std::vector<double>{5.0});  // boundary feasible
  CHECK_THROWS_AS(clamp(SearchSpace::binary(2), {0.0, 1.0}),
                  UnsupportedSpaceError);
}

TEST_CASE("evaluate sets the loss and counts exactly one call") {
  EvalCounter counter;
  Candidate c{{0.0, 0.0, 0.0}, std::nullopt};
  Candidate out = evaluate(sphere, c, counter);
  CHECK(*out.loss == 0.0);
  CHECK(counter.count == 1);

  // hand arithmetic 1^2 + 2^2, checked in extended precision
  const long double expected = 1.0L * 1.0L + 2.0L * 2.0L;
  Candidate c2{{1.0, 2.0}, std::nullopt};
  Candidate out2 = evaluate(sphere, c2, counter);
  CHECK(*out2.loss == static_cast<double>(expected));
  CHECK(counter.count == 2);
}

TEST_CASE("evaluate returns cached candidates unchanged without counting") {
  EvalCounter counter;
  Candidate c{{1.0, 1.0}, 42.0};
  Candidate out = evaluate(sphere, c, counter);
  CHECK(*out.loss == 42.0);
  CHECK(counter.count == 0);
}

TEST_CASE("non-finite losses abort with the offending vector") {
  EvalCounter counter;
  const Objective bad = [](const std::vector<double>&) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  Candidate c{{3.0, 4.0}, std::nullopt};
  try {
    evaluate(bad, c, counter);
    FAIL("expected NonFiniteLossError");
  } catch (const NonFiniteLossError& e) {
    CHECK(e.where() == std::vector<double>{3.0, 4.0});
  }
}

TEST_CASE("should_stop fires in documented priority order") {
  StopCriteria criteria;
  criteria.max_evals = 100;

  RunState at_budget;
  at_budget.evals = 100;
  CHECK(should_stop(at_budget, criteria) == StopReason::MaxEvals);  // inclusive

  StopCriteria with_target = criteria;
  with_target.target_loss = 1e-9;
  RunState hit;
  hit.evals = 100;  // both fire; target wins
  hit.best_loss = 1e-12;
  CHECK(should_stop(hit, with_target) == StopReason::TargetLoss);

  RunState fresh;
  fresh.evals = 3;
  fresh.best_loss = 1.0;
  CHECK_FALSE(should_stop(fresh, criteria).has_value());

  StopCriteria stall = criteria;
  stall.stall_iters = 5;
  RunState stalled;
  stalled.evals = 10;
  stalled.iters_without_improvement = 5;
  CHECK(should_stop(stalled, stall) == StopReason::Stall);

  StopCriteria iters = criteria;
  iters.max_iters = 7;
  RunState finished;
  finished.evals = 10;
  finished.iter = 7;
  CHECK(should_stop(finished, iters) == StopReason::MaxIters);
}

TEST_CASE("population sort is stable and demands losses") {
  Population pop;
  pop.members = {{{1.0}, 3.0}, {{2.0}, 1.0}, {{3.0}, 3.0}};
  pop.sort_by_loss();
  CHECK(pop.sorted);
  CHECK(pop[0].values[0] == 2.0);
  CHECK(pop[1].values[0] == 1.0);  // stable: first 3.0 stays ahead
  CHECK(pop[2].values[0] == 3.0);

  Population missing;
  missing.members = {{{1.0}, std::nullopt}};
  CHECK_THROWS_AS(missing.sort_by_loss(), std::logic_error);
}

TEST_CASE("RunContext enforces the budget exactly") {
  StopCriteria criteria;
  criteria.max_evals = 10;
  RunContext ctx("test", sphere, SearchSpace::continuous(1, -1.0, 1.0),
                 criteria, 1);
  std::size_t completed = 0;
  try {
    for (int i = 0; i < 100; ++i) {
      ctx.evaluate({0.5});
      ++completed;
    }
    FAIL("expected StopRun");
  } catch (const detail::StopRun& stop) {
    CHECK(stop.reason == StopReason::MaxEvals);
  }
  CHECK(completed == 9);  // the 10th call throws after being counted
  CHECK(ctx.evaluations() == 10);
}

TEST_CASE("RunContext prefers target_loss over max_evals") {
  StopCriteria criteria;
  criteria.max_evals = 1;
  criteria.target_loss = 1.0;
  RunContext ctx("test", sphere, SearchSpace::continuous(1, -1.0, 1.0),
                 criteria, 1);
  try {
    ctx.evaluate({0.5});  // loss 0.25 <= target and budget exhausted
    FAIL("expected StopRun");
  } catch (const detail::StopRun& stop) {
    CHECK(stop.reason == StopReason::TargetLoss);
  }
}

TEST_CASE("trace history is a strictly improving staircase") {
  // A loss sequence that goes up and down; the staircase must only record
  // strict improvements at strictly increasing eval counts.
  const std::vector<double> losses = {5.0, 7.0, 3.0, 3.0, 2.0, 9.0, 1.0};
  std::size_t call = 0;
  const Objective wobble = [&](const std::vector<double>&) {
    return losses[call++ % losses.size()];
  };
  StopCriteria criteria;
  criteria.max_evals = losses.size();
  RunContext ctx("test", wobble, SearchSpace::continuous(1, -1.0, 1.0),
                 criteria, 3);
  RunTrace trace = detail::drive(ctx, [&]() -> StopReason {
    for (;;) ctx.evaluate({0.0});
  });
  REQUIRE(trace.history.size() == 4);
  CHECK(trace.history[0].evals == 1);
  CHECK(trace.history[0].best_loss == 5.0);
  CHECK(trace.history[1].evals == 3);
  CHECK(trace.history[1].best_loss == 3.0);
  CHECK(trace.history[2].evals == 5);
  CHECK(trace.history[2].best_loss == 2.0);
  CHECK(trace.history[3].evals == 7);
  CHECK(trace.history[3].best_loss == 1.0);
  CHECK(trace.total_evals == 7);
  CHECK(*trace.best.loss == 1.0);
  CHECK(trace.stop_reason == StopReason::MaxEvals);
}

TEST_CASE("stall detector counts iterations without improvement") {
  std::size_t call = 0;
  const Objective flat = [&](const std::vector<double>&) {
    return call++ == 0 ? 1.0 : 2.0;  // never improves after the first call
  };
  StopCriteria criteria;
  criteria.max_evals = 1000;
  criteria.stall_iters = 4;
  RunContext ctx("test", flat, SearchSpace::continuous(1, -1.0, 1.0), criteria,
                 9);
  RunTrace trace = detail::drive(ctx, [&]() -> StopReason {
    for (;;) {
      ctx.evaluate({0.0});
      ctx.end_iteration();
    }
  });
  CHECK(trace.stop_reason == StopReason::Stall);
  // iteration 1 improves (from +inf); iterations 2..5 stall
  CHECK(trace.total_evals == 5);
}
