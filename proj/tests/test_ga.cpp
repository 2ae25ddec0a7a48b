#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "dfo/benchmarks.hpp"
#include "dfo/errors.hpp"
#include "dfo/ga.hpp"
#include "oracles.hpp"

using namespace dfo;
using namespace dfo::ga;

TEST_CASE("degenerate bernoulli init gives the all-ones population") {
  SearchSpace space = SearchSpace::binary(10);
  GaConfig cfg;
  cfg.pop_size = 6;
  cfg.init_bernoulli_p = 1.0;
  RandomStream rng(1);
  Population pop = init_population(space, cfg, rng);
  for (const Candidate& c : pop.members) {
    CHECK_FALSE(c.loss.has_value());
    for (double b : c.values) CHECK(b == 1.0);
  }
}

TEST_CASE("bernoulli init bit mean matches p") {
  SearchSpace space = SearchSpace::binary(20);
  GaConfig cfg;
  cfg.pop_size = 10000;
  cfg.init_bernoulli_p = 0.3;
  RandomStream rng(2);
  Population pop = init_population(space, cfg, rng);
  long double ones = 0.0L;
  for (const Candidate& c : pop.members)
    for (double b : c.values) ones += b;
  CHECK(std::abs(static_cast<double>(ones) / (10000.0 * 20.0) - 0.3) < 0.01);
}

TEST_CASE("gaussian init sample mean is near the configured mean") {
  SearchSpace space = SearchSpace::continuous(3, -10.0, 10.0);
  GaConfig cfg;
  cfg.pop_size = 10000;
  cfg.init_mean = 0.0;
  cfg.init_stddev = 1.0;
  RandomStream rng(3);
  Population pop = init_population(space, cfg, rng);
  for (std::size_t j = 0; j < 3; ++j) {
    long double sum = 0.0L;
    for (const Candidate& c : pop.members) {
      REQUIRE(c.values[j] >= -10.0);
      REQUIRE(c.values[j] <= 10.0);
      sum += c.values[j];
    }
    CHECK(std::abs(static_cast<double>(sum) / 10000.0) < 0.05);
  }
}

TEST_CASE("selection probabilities: symmetry, exact values, overflow safety") {
  const auto equal = selection_probabilities({7.5, 7.5, 7.5, 7.5});
  for (double p : equal) CHECK(p == doctest::Approx(0.25).epsilon(1e-15));

  // frozen from the extended-precision oracle: exp(0)/(1+1/3) etc.
  const auto two = selection_probabilities({0.0, std::log(3.0)});
  const auto expected = oracles::softmax_direct({0.0, std::log(3.0)});
  CHECK(std::abs(two[0] - 0.75) < 1e-12);
  CHECK(std::abs(two[1] - 0.25) < 1e-12);
  CHECK(std::abs(two[0] - expected[0]) < 1e-12);
  CHECK(std::abs(two[1] - expected[1]) < 1e-12);

  const auto extreme = selection_probabilities({0.0, 1e6});
  CHECK(extreme[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(extreme[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::isfinite(extreme[0]));

  CHECK_THROWS_AS(selection_probabilities({}), EmptyPopulationError);
}

TEST_CASE("selection probabilities sum to one and are shift invariant") {
  RandomStream rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> losses(8);
    for (double& l : losses) l = rng.uniform(-100.0, 100.0);
    const auto probs = selection_probabilities(losses);
    long double sum = 0.0L;
    for (double p : probs) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::abs(static_cast<double>(sum) - 1.0) < 1e-12);

    std::vector<double> shifted = losses;
    for (double& l : shifted) l += 37.25;  // exactly representable shift
    const auto probs2 = selection_probabilities(shifted);
    for (std::size_t i = 0; i < probs.size(); ++i)
      CHECK(std::abs(probs[i] - probs2[i]) < 1e-12);
  }
}

namespace {
Population make_pop(std::size_t n) {
  Population pop;
  for (std::size_t i = 0; i < n; ++i)
    pop.members.push_back({{static_cast<double>(i)}, static_cast<double>(i)});
  return pop;
}
}  // namespace

TEST_CASE("two candidates always pair up as (0,1) in some order") {
  Population pop = make_pop(2);
  RandomStream rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    const auto pairs = select_parent_pairs(pop, {0.9, 0.1}, rng);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first != pairs[0].second);
  }
}

TEST_CASE("uniform probabilities give uniform marginal pair frequencies") {
  Population pop = make_pop(4);
  RandomStream rng(5);
  std::vector<std::size_t> counts(4, 0);
  const int reps = 250000;  // 2 pairs per call -> 1e6 slots
  for (int rep = 0; rep < reps; ++rep) {
    for (const auto& [a, b] : select_parent_pairs(pop, {0.25, 0.25, 0.25, 0.25}, rng)) {
      ++counts[a];
      ++counts[b];
    }
  }
  const double total = 4.0 * reps;
  for (std::size_t c : counts)
    CHECK(std::abs(static_cast<double>(c) / total - 0.25) < 0.01);
}

TEST_CASE("a dominant parent appears in nearly every pair") {
  Population pop = make_pop(5);
  RandomStream rng(6);
  const std::vector<double> probs = {0.996, 0.001, 0.001, 0.001, 0.001};
  std::size_t containing = 0;
  const int reps = 100000;
  std::size_t pairs_seen = 0;
  for (int rep = 0; rep < reps; ++rep) {
    for (const auto& [a, b] : select_parent_pairs(pop, probs, rng)) {
      ++pairs_seen;
      if (a == 0 || b == 0) ++containing;
    }
  }
  CHECK(static_cast<double>(containing) / static_cast<double>(pairs_seen) > 0.99);
}

TEST_CASE("single-point crossover swaps complementary tails") {
  const std::vector<double> a = {0, 0, 0, 0};
  const std::vector<double> b = {1, 1, 1, 1};
  RandomStream rng(7);
  bool saw_cut_after_two = false;
  for (int rep = 0; rep < 64; ++rep) {
    const auto [c1, c2] = crossover(a, b, 1, rng);
    // the cut position g is recoverable from the children
    std::size_t g = 0;
    while (g < 4 && c1[g] == 0.0) ++g;
    REQUIRE(g >= 1);
    REQUIRE(g <= 3);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(c1[j] == (j < g ? 0.0 : 1.0));
      CHECK(c2[j] == (j < g ? 1.0 : 0.0));
    }
    if (g == 2) {
      saw_cut_after_two = true;
      CHECK(c1 == std::vector<double>{0, 0, 1, 1});
      CHECK(c2 == std::vector<double>{1, 1, 0, 0});
    }
  }
  CHECK(saw_cut_after_two);
}

TEST_CASE("identical parents breed identical children") {
  const std::vector<double> a = {3.5, -1.0, 2.0, 0.0, 9.0};
  RandomStream rng(8);
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto [c1, c2] = crossover(a, a, k, rng);
    CHECK(c1 == a);
    CHECK(c2 == a);
  }
  const auto [u1, u2] = crossover(a, a, std::nullopt, rng);
  CHECK(u1 == a);
  CHECK(u2 == a);
}

TEST_CASE("crossover complementarity holds for every k (exhaustive, d=6)") {
  const std::vector<double> a = {10, 11, 12, 13, 14, 15};
  const std::vector<double> b = {20, 21, 22, 23, 24, 25};
  RandomStream rng(9);
  for (std::size_t k = 1; k <= 5; ++k) {
    for (int rep = 0; rep < 100; ++rep) {
      const auto [c1, c2] = crossover(a, b, k, rng);
      for (std::size_t j = 0; j < 6; ++j) {
        const bool fine = (c1[j] == a[j] && c2[j] == b[j]) ||
                          (c1[j] == b[j] && c2[j] == a[j]);
        CHECK(fine);
      }
      // exactly k source switches along the children
      std::size_t switches = 0;
      for (std::size_t j = 1; j < 6; ++j)
        if ((c1[j] == a[j]) != (c1[j - 1] == a[j - 1])) ++switches;
      CHECK(switches == k);
    }
  }
  // uniform mode keeps complementarity too
  for (int rep = 0; rep < 100; ++rep) {
    const auto [c1, c2] = crossover(a, b, std::nullopt, rng);
    for (std::size_t j = 0; j < 6; ++j) {
      const bool fine = (c1[j] == a[j] && c2[j] == b[j]) ||
                        (c1[j] == b[j] && c2[j] == a[j]);
      CHECK(fine);
    }
  }
}

TEST_CASE("crossover rejects k >= dim") {
  RandomStream rng(10);
  CHECK_THROWS_AS(crossover({1, 2, 3}, {4, 5, 6}, 3, rng),
                  std::invalid_argument);
}

TEST_CASE("mutation probability endpoints") {
  SearchSpace space = SearchSpace::binary(12);
  GaConfig cfg;
  RandomStream rng(11);
  const std::vector<double> v = {1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0};

  cfg.mutation_prob = 0.0;
  CHECK(mutate(v, space, cfg, rng) == v);

  cfg.mutation_prob = 1.0;
  const auto flipped = mutate(v, space, cfg, rng);
  for (std::size_t j = 0; j < v.size(); ++j) CHECK(flipped[j] == 1.0 - v[j]);
}

TEST_CASE("mean mutated-position count is eta * d") {
  SearchSpace space = SearchSpace::binary(100);
  GaConfig cfg;
  cfg.mutation_prob = 0.1;
  RandomStream rng(12);
  const std::vector<double> zero(100, 0.0);
  long double flips = 0.0L;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    const auto m = mutate(zero, space, cfg, rng);
    for (double b : m) flips += b;
  }
  // mean 10, sd of the mean = 3/sqrt(1e5) = 0.0095; the 0.1 band is >10 se
  CHECK(std::abs(static_cast<double>(flips) / trials - 10.0) < 0.1);
}

TEST_CASE("real-valued mutation stays in the box") {
  SearchSpace space = SearchSpace::continuous(4, -1.0, 1.0);
  GaConfig cfg;
  cfg.mutation_prob = 1.0;
  cfg.mutation_stddev = 5.0;
  RandomStream rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const auto m = mutate({0.9, -0.9, 0.0, 0.5}, space, cfg, rng);
    CHECK(space.contains(m));
  }
}

TEST_CASE("run: exactly one generation is evaluated when the budget equals pop_size") {
  SearchSpace space = SearchSpace::binary(16);
  GaConfig cfg;
  cfg.pop_size = 20;
  StopCriteria criteria;
  criteria.max_evals = 20;
  RandomStream rng(14);
  const RunTrace trace =
      run(bench::find_benchmark("onemax").objective, space, cfg, criteria, rng);
  CHECK(trace.total_evals == 20);
  CHECK(trace.stop_reason == StopReason::MaxEvals);
}

TEST_CASE("run: full elitism freezes the population") {
  SearchSpace space = SearchSpace::binary(8);
  GaConfig cfg;
  cfg.pop_size = 10;
  cfg.elitism = 10;
  StopCriteria criteria;
  criteria.max_evals = 100000;
  criteria.max_iters = 5;
  RandomStream rng(15);
  std::vector<std::vector<double>> snapshots;
  run(bench::find_benchmark("onemax").objective, space, cfg, criteria, rng, {},
      [&](const Population& pop) {
        std::vector<double> losses;
        for (const Candidate& c : pop.members) losses.push_back(*c.loss);
        std::sort(losses.begin(), losses.end());
        snapshots.push_back(losses);
      });
  REQUIRE(snapshots.size() >= 2);
  for (std::size_t g = 1; g < snapshots.size(); ++g)
    CHECK(snapshots[g] == snapshots[0]);
}

TEST_CASE("run: with elitism the generation best never worsens") {
  SearchSpace space = SearchSpace::continuous(3, -5.12, 5.12);
  GaConfig cfg;
  cfg.pop_size = 16;
  cfg.elitism = 1;
  StopCriteria criteria;
  criteria.max_evals = 3000;
  RandomStream rng(16);
  double last_best = std::numeric_limits<double>::infinity();
  run(bench::find_benchmark("rastrigin").objective, space, cfg, criteria, rng,
      {}, [&](const Population& pop) {
        double best = std::numeric_limits<double>::infinity();
        for (const Candidate& c : pop.members) best = std::min(best, *c.loss);
        CHECK(best <= last_best);
        last_best = best;
      });
}

TEST_CASE("run: non-finite losses abort the run") {
  SearchSpace space = SearchSpace::continuous(2, -1.0, 1.0);
  GaConfig cfg;
  cfg.pop_size = 4;
  StopCriteria criteria;
  criteria.max_evals = 100;
  RandomStream rng(20);
  std::size_t calls = 0;
  const Objective poisoned = [&calls](const std::vector<double>&) {
    return ++calls == 3 ? std::numeric_limits<double>::infinity() : 1.0;
  };
  CHECK_THROWS_AS(run(poisoned, space, cfg, criteria, rng), NonFiniteLossError);
}

TEST_CASE("run: onemax regression fixture") {
  // implementer baseline: seed 1, pop 40, eta = 1/32 solves d=32 well inside
  // the 20k budget
  SearchSpace space = SearchSpace::binary(32);
  GaConfig cfg;
  cfg.pop_size = 40;
  cfg.mutation_prob = 1.0 / 32.0;
  StopCriteria criteria;
  criteria.max_evals = 20000;
  criteria.target_loss = 0.0;
  RandomStream rng(1);
  const RunTrace trace =
      run(bench::find_benchmark("onemax").objective, space, cfg, criteria, rng);
  CHECK(*trace.best.loss == 0.0);
  CHECK(trace.total_evals <= 20000);
}
