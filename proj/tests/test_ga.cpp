#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dssa/ga.hpp"
#include "test_util.hpp"

using namespace dssa;

namespace {

struct Fixture {
  CircuitModel model = parse_netlist(dssa_test::kOnePole);
  Rng rng{5};
  std::vector<DataPoint> train = sample_dataset(model, 8, rng);
  FrequencyGrid grid = frequency_grid(train.front().exact, 3);
  FitnessConfig fcfg;
  ChromosomeDims dims{0, 1, 3, 5};
  EvalContext ctx{model, train, grid, fcfg, dims};
};

int hamming(const Chromosome& a, const Chromosome& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.genes.size(); ++i)
    if (a.genes[i] != b.genes[i]) ++d;
  return d;
}

}  // namespace

TEST_CASE("config validation") {
  GaConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  GaConfig bad = cfg;
  bad.population = 1;
  CHECK_THROWS(bad.validate());
  bad = cfg;
  bad.p_r = 0.3;  // fractions no longer sum to 1
  CHECK_THROWS(bad.validate());
}

TEST_CASE("init_population shape and determinism") {
  GaConfig cfg;
  ChromosomeDims dims{0, 1, 3, 5};
  Rng a(42), b(42), c(43);
  auto pa = init_population(cfg, dims, a);
  auto pb = init_population(cfg, dims, b);
  auto pc = init_population(cfg, dims, c);
  REQUIRE(pa.size() == 50);
  for (const auto& ch : pa) {
    CHECK(ch.dims.rows() == 3);
    CHECK(static_cast<int>(ch.genes.size()) == ch.gene_count());
    for (int p = 0; p < ch.dims.rows(); ++p)
      for (int q = 0; q < ch.dims.cols(); ++q) {
        if (ch.is_selector_column(q))
          CHECK((ch.at(p, q) == -1 || ch.at(p, q) == 0 || ch.at(p, q) == 1));
        else
          CHECK((ch.at(p, q) == 0 || ch.at(p, q) == 1));
      }
  }
  CHECK(pa == pb);
  CHECK(pa != pc);
}

TEST_CASE("degenerate TS init produces all-empty polynomials") {
  GaConfig cfg;
  cfg.ts_init_zero = 1.0;
  cfg.ts_init_pos = 0.0;
  cfg.ts_init_neg = 0.0;
  Rng rng(1);
  auto pop = init_population(cfg, ChromosomeDims{0, 1, 3, 5}, rng);
  for (const auto& ch : pop) CHECK(ch.active_terms() == 0);
}

TEST_CASE("roulette favors lower objectives") {
  Rng rng(7);
  std::vector<double> objectives{1.0, 3.0};
  int first = 0;
  for (int i = 0; i < 10000; ++i)
    if (select_roulette(objectives, rng) == 0) ++first;
  CHECK(first > 9900);  // weight ratio ~ 2 : epsilon

  // All equal -> near-uniform.
  std::vector<double> flat{2.0, 2.0, 2.0, 2.0};
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 20000; ++i) ++counts[select_roulette(flat, rng)];
  for (int c : counts) CHECK(std::abs(c - 5000) < 400);

  std::vector<double> lone{5.0};
  CHECK(select_roulette(lone, rng) == 0);
}

TEST_CASE("uniform crossover closure and mixing") {
  Rng rng(11);
  ChromosomeDims dims{0, 1, 3, 5};
  GaConfig cfg;
  auto pop = init_population(cfg, dims, rng);
  const Chromosome& a = pop[0];
  const Chromosome& b = pop[1];

  Chromosome same = uniform_crossover(a, a, rng);
  CHECK(same == a);

  int from_a = 0, total = 0, differing = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    Chromosome child = uniform_crossover(a, b, rng);
    for (std::size_t i = 0; i < child.genes.size(); ++i) {
      CHECK((child.genes[i] == a.genes[i] || child.genes[i] == b.genes[i]));
      if (a.genes[i] != b.genes[i]) {
        ++total;
        if (child.genes[i] == a.genes[i]) ++from_a;
        ++differing;
      }
    }
  }
  REQUIRE(total > 0);
  CHECK(std::abs(from_a / double(total) - 0.5) < 0.02);

  Chromosome small;
  small.dims = ChromosomeDims{0, 0, 3, 5};
  small.genes.assign(small.gene_count(), 0);
  CHECK_THROWS(uniform_crossover(a, small, rng));
}

TEST_CASE("mutation is always at Hamming distance 1") {
  Rng rng(13);
  GaConfig cfg;
  ChromosomeDims dims{0, 1, 3, 5};
  auto pop = init_population(cfg, dims, rng);
  for (int rep = 0; rep < 500; ++rep) {
    const Chromosome& parent = pop[rep % pop.size()];
    Chromosome child = mutate(parent, rng);
    CHECK(hamming(parent, child) == 1);
    // The changed gene is still in its legal alphabet.
    for (std::size_t i = 0; i < child.genes.size(); ++i) {
      if (child.genes[i] == parent.genes[i]) continue;
      const int q = static_cast<int>(i) % child.dims.cols();
      if (child.dims.param_count == q % (child.dims.param_count + 1)) {
        CHECK((child.genes[i] >= -1 && child.genes[i] <= 1));
      } else {
        CHECK((child.genes[i] == 0 || child.genes[i] == 1));
      }
    }
  }
}

TEST_CASE("TS mutation resamples the other two values") {
  Rng rng(17);
  ChromosomeDims dims{0, 0, 1, 1};  // P=2, Q=2: genes are S, TS per row
  Chromosome c;
  c.dims = dims;
  c.genes.assign(c.gene_count(), 0);
  int plus = 0, minus = 0;
  for (int rep = 0; rep < 4000; ++rep) {
    Chromosome child = mutate(c, rng);
    for (int p = 0; p < 2; ++p) {
      std::int8_t ts = child.selector(p, 0);
      if (ts == 1) ++plus;
      if (ts == -1) ++minus;
    }
  }
  CHECK(plus > 0);
  CHECK(minus > 0);
  CHECK(std::abs(plus - minus) < 0.15 * (plus + minus));
}

TEST_CASE("run: progress fires once per iteration with monotone objective") {
  Fixture fx;
  GaConfig cfg;
  cfg.population = 20;
  cfg.iterations = 100;
  Rng rng(23);
  std::vector<int> iters;
  std::vector<double> best;
  GaResult res = run(cfg, fx.ctx, rng, [&](int it, double obj, bool) {
    iters.push_back(it);
    best.push_back(obj);
  });
  REQUIRE(iters.size() == 100);
  for (int i = 0; i < 100; ++i) CHECK(iters[i] == i + 1);
  for (int i = 1; i < 100; ++i) CHECK(best[i] <= best[i - 1]);
  CHECK(best == res.history);
}

TEST_CASE("run: history is monotone and deterministic") {
  Fixture fx;
  GaConfig cfg;
  cfg.population = 20;
  cfg.iterations = 60;
  Rng r1(23), r2(23);
  GaResult a = run(cfg, fx.ctx, r1);
  GaResult b = run(cfg, fx.ctx, r2);
  REQUIRE(a.history.size() == 60);
  for (std::size_t i = 1; i < a.history.size(); ++i)
    CHECK(a.history[i] <= a.history[i - 1]);
  CHECK(a.history == b.history);
  CHECK(a.best == b.best);

  Rng r3(24);
  GaResult c = run(cfg, fx.ctx, r3);
  CHECK(a.history != c.history);
}

TEST_CASE("run: iterations = 0 returns the best of the initial population") {
  Fixture fx;
  GaConfig cfg;
  cfg.population = 12;
  cfg.iterations = 0;
  Rng rng(31);
  GaResult res = run(cfg, fx.ctx, rng);
  CHECK(res.history.empty());

  // Recompute the initial population on an identical stream and verify the
  // returned objective equals its minimum.
  Rng twin(31);
  auto pop = init_population(cfg, fx.dims, twin);
  double best = 1e300;
  for (const auto& ch : pop) best = std::min(best, fx.ctx.objective(ch).objective);
  CHECK(res.best_eval.objective == doctest::Approx(best));
}

TEST_CASE("run: one-pole converges to the exact structure") {
  Fixture fx;
  GaConfig cfg;
  cfg.iterations = 300;
  Rng rng(1);
  GaResult res = run(cfg, fx.ctx, rng);
  CHECK(res.best_is_feasible);
  CHECK(res.best_eval.error <= 1e-6);
  CHECK(res.best.active_terms() <= 3);
}
