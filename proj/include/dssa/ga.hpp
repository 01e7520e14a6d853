#ifndef DSSA_GA_HPP_
#define DSSA_GA_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "dssa/fitness.hpp"

namespace dssa {

struct GaConfig {
  int population = 50;
  int iterations = 1000;
  double p_r = 0.1;  // reproduction (elitist copy) fraction
  double p_c = 0.5;  // crossover fraction
  double p_m = 0.4;  // mutation fraction
  // TS-gene initialization probabilities for {0, +1, -1}; biased to the
  // sparse side so early populations are not drowned in penalty.
  double ts_init_zero = 0.7;
  double ts_init_pos = 0.2;
  double ts_init_neg = 0.1;
  // Evaluate offspring concurrently. Evaluation is pure and never touches
  // the random stream, so results stay identical to sequential mode.
  bool parallel_eval = false;

  void validate() const;  // throws std::invalid_argument
};

struct GaResult {
  Chromosome best;
  EvaluationResult best_eval;
  bool best_is_feasible = false;      // false => infeasibility warning applies
  std::vector<double> history;        // best-ever objective after each iteration
};

std::vector<Chromosome> init_population(const GaConfig& cfg, const ChromosomeDims& dims,
                                        Rng& rng);

// Roulette wheel for minimization: weight_i = Obj_max - Obj_i + eps.
int select_roulette(const std::vector<double>& objectives, Rng& rng);

Chromosome uniform_crossover(const Chromosome& a, const Chromosome& b, Rng& rng);

// Changes exactly one gene: an S-gene flips, a TS-gene is resampled
// uniformly from the other two ternary values. Hamming distance 1 always.
Chromosome mutate(const Chromosome& parent, Rng& rng);

// Elitist generational GA. Per generation the stream is consumed in a fixed
// order: all selection draws, then crossover masks, then mutation draws, so
// seeded runs are bit-reproducible. progress (optional) is called once per
// iteration with (iteration, best objective, feasible).
GaResult run(const GaConfig& cfg, const EvalContext& ctx, Rng& rng,
             const std::function<void(int, double, bool)>& progress = {});

}  // namespace dssa

#endif  // DSSA_GA_HPP_
