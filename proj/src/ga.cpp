#include "dssa/ga.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace dssa {

void GaConfig::validate() const {
  if (population < 2) throw std::invalid_argument("population must be >= 2");
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (std::abs(p_r + p_c + p_m - 1.0) > 1e-12)
    throw std::invalid_argument("p_r + p_c + p_m must equal 1");
  if (p_r < 0.0 || p_c < 0.0 || p_m < 0.0)
    throw std::invalid_argument("operator fractions must be nonnegative");
  if (ts_init_zero < 0.0 || ts_init_pos < 0.0 || ts_init_neg < 0.0 ||
      std::abs(ts_init_zero + ts_init_pos + ts_init_neg - 1.0) > 1e-12)
    throw std::invalid_argument("TS init probabilities must sum to 1");
}

std::vector<Chromosome> init_population(const GaConfig& cfg, const ChromosomeDims& dims,
                                        Rng& rng) {
  std::vector<Chromosome> pop;
  pop.reserve(cfg.population);
  for (int i = 0; i < cfg.population; ++i) {
    Chromosome ch;
    ch.dims = dims;
    ch.genes.resize(ch.gene_count());
    for (int p = 0; p < dims.rows(); ++p) {
      for (int q = 0; q < dims.cols(); ++q) {
        if (ch.is_selector_column(q)) {
          const double u = rng.uniform();
          ch.at(p, q) = u < cfg.ts_init_zero             ? 0
                        : u < cfg.ts_init_zero + cfg.ts_init_pos ? +1
                                                                 : -1;
        } else {
          ch.at(p, q) = rng.coin() ? 1 : 0;
        }
      }
    }
    pop.push_back(std::move(ch));
  }
  return pop;
}

int select_roulette(const std::vector<double>& objectives, Rng& rng) {
  const auto [mn, mx] = std::minmax_element(objectives.begin(), objectives.end());
  const double eps = 1e-12 * (*mx - *mn + 1.0);
  double total = 0.0;
  for (double o : objectives) total += *mx - o + eps;
  double ticket = rng.uniform() * total;
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    ticket -= *mx - objectives[i] + eps;
    if (ticket < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(objectives.size()) - 1;
}

Chromosome uniform_crossover(const Chromosome& a, const Chromosome& b, Rng& rng) {
  if (!(a.dims.rows() == b.dims.rows() && a.dims.cols() == b.dims.cols()))
    throw std::invalid_argument("uniform_crossover: dimension mismatch");
  Chromosome child = a;
  for (std::size_t i = 0; i < child.genes.size(); ++i)
    if (rng.coin()) child.genes[i] = b.genes[i];
  return child;
}

Chromosome mutate(const Chromosome& parent, Rng& rng) {
  Chromosome child = parent;
  const int pos = static_cast<int>(rng.uniform_index(child.genes.size()));
  const int q = pos % child.dims.cols();
  if (child.is_selector_column(q)) {
    // Resample uniformly from the other two ternary values.
    static constexpr std::int8_t kTs[3] = {-1, 0, +1};
    std::int8_t cur = child.genes[pos];
    std::int8_t others[2];
    int n = 0;
    for (std::int8_t v : kTs)
      if (v != cur) others[n++] = v;
    child.genes[pos] = others[rng.coin() ? 1 : 0];
  } else {
    child.genes[pos] = child.genes[pos] ? 0 : 1;
  }
  return child;
}

GaResult run(const GaConfig& cfg, const EvalContext& ctx, Rng& rng,
             const std::function<void(int, double, bool)>& progress) {
  cfg.validate();

  std::vector<Chromosome> pop = init_population(cfg, ctx.dims(), rng);
  std::vector<EvaluationResult> evals(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) evals[i] = ctx.objective(pop[i]);

  // Two incumbents: best-ever by objective (drives the monotone history) and
  // best-ever feasible (what a finished run actually returns, when seen).
  GaResult result;
  Chromosome best_any, best_feasible;
  EvaluationResult best_any_eval, best_feasible_eval;
  bool have_any = false, have_feasible = false;
  auto consider = [&](const Chromosome& ch, const EvaluationResult& ev) {
    if (!have_any || ev.objective < best_any_eval.objective) {
      best_any = ch;
      best_any_eval = ev;
      have_any = true;
    }
    if (ev.feasible &&
        (!have_feasible || ev.objective < best_feasible_eval.objective)) {
      best_feasible = ch;
      best_feasible_eval = ev;
      have_feasible = true;
    }
  };
  for (std::size_t i = 0; i < pop.size(); ++i) consider(pop[i], evals[i]);

  const int n_rep = static_cast<int>(std::ceil(cfg.p_r * cfg.population));
  const int n_cross = std::min(static_cast<int>(std::ceil(cfg.p_c * cfg.population)),
                               cfg.population - n_rep);
  const int n_mut = cfg.population - n_rep - n_cross;

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    std::vector<double> objectives(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) objectives[i] = evals[i].objective;

    // 1. Selection draws.
    std::vector<int> cross_parents(2 * n_cross), mut_parents(n_mut);
    for (int& idx : cross_parents) idx = select_roulette(objectives, rng);
    for (int& idx : mut_parents) idx = select_roulette(objectives, rng);

    // Elites: best n_rep by objective, stable on ties.
    std::vector<int> rank(pop.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(),
                     [&](int a, int b) { return objectives[a] < objectives[b]; });

    std::vector<Chromosome> next;
    std::vector<EvaluationResult> next_evals;
    next.reserve(pop.size());
    next_evals.reserve(pop.size());
    for (int i = 0; i < n_rep; ++i) {
      next.push_back(pop[rank[i]]);
      next_evals.push_back(evals[rank[i]]);  // elites keep their evaluation
    }

    // 2. Crossover masks.
    for (int i = 0; i < n_cross; ++i) {
      next.push_back(uniform_crossover(pop[cross_parents[2 * i]],
                                       pop[cross_parents[2 * i + 1]], rng));
      next_evals.emplace_back();
    }
    // 3. Mutation draws.
    for (int i = 0; i < n_mut; ++i) {
      next.push_back(mutate(pop[mut_parents[i]], rng));
      next_evals.emplace_back();
    }

    if (cfg.parallel_eval) {
      const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
      std::vector<std::future<void>> jobs;
      for (unsigned w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
          for (std::size_t i = n_rep + w; i < next.size(); i += workers)
            next_evals[i] = ctx.objective(next[i]);
        }));
      }
      for (auto& j : jobs) j.get();
    } else {
      for (std::size_t i = n_rep; i < next.size(); ++i)
        next_evals[i] = ctx.objective(next[i]);
    }

    pop = std::move(next);
    evals = std::move(next_evals);
    for (std::size_t i = 0; i < pop.size(); ++i) consider(pop[i], evals[i]);

    result.history.push_back(best_any_eval.objective);
    if (progress) progress(iter + 1, best_any_eval.objective, have_feasible);
  }

  if (have_feasible) {
    result.best = std::move(best_feasible);
    result.best_eval = std::move(best_feasible_eval);
    result.best_is_feasible = true;
  } else {
    result.best = std::move(best_any);
    result.best_eval = std::move(best_any_eval);
    result.best_is_feasible = false;
  }
  return result;
}

}  // namespace dssa
