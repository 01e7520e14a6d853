#ifndef DSSA_FITNESS_HPP_
#define DSSA_FITNESS_HPP_

#include <utility>
#include <vector>

#include "dssa/sampling.hpp"
#include "dssa/symbolic.hpp"

namespace dssa {

struct FitnessConfig {
  double w1 = 0.8;             // complexity weight
  double w2 = 0.2;             // error weight
  double t_dc = 3.0;           // dc-gain tolerance, dB
  double t_root = 0.30;        // relative pole/zero tolerance
  double penalty_lambda = 10.0;
  double error_clamp_db = 100.0;
};

// Per-constraint slacks; <= 0 means satisfied.
struct ConstraintSlacks {
  double dc = 0.0;
  double pole = 0.0;
  double zero = 0.0;
  double degree = 0.0;

  bool feasible() const { return dc <= 0.0 && pole <= 0.0 && zero <= 0.0 && degree <= 0.0; }
};

struct EvaluationResult {
  double complexity = 0.0;
  double error = 0.0;
  double objective = 0.0;
  bool feasible = false;
  ConstraintSlacks violations;          // max slack over all train points
  std::vector<double> per_point_dc_err;   // |dc error| in dB per point
  std::vector<double> per_point_root_err; // max relative root error per point
};

struct RootMatch {
  // (simplified root, exact root, relative error) per matched pair.
  struct Pair {
    Complex simplified;
    Complex exact;
    double rel_error;
  };
  std::vector<Pair> pairs;
  int unmatched_exact = 0;

  // Max matched error, with each unmatched exact root counting as 1.
  double max_error() const;
};

// Fraction of active term slots, (1/(P*T)) * sum |TS|.
double complexity(const Chromosome& chrom);

// Mean magnitude (dB) + phase (rad) discrepancy over all (point, frequency)
// pairs; singular simplified evaluations contribute error_clamp_db.
double response_error(const SymbolicRational& sr, const std::vector<DataPoint>& points,
                      const FrequencyGrid& grid, const FitnessConfig& cfg);

// Greedy one-to-one matching by relative distance |r_s - r_e| / |r_e|.
// zero_ref replaces |r_e| when an exact root sits at 0.
RootMatch match_roots(const std::vector<Complex>& simplified_roots,
                      const std::vector<Complex>& exact_roots, double zero_ref);

// Constraint slacks (dc gain, pole/zero placement, degree) for one data point.
ConstraintSlacks constraints(const SymbolicRational& sr, const DataPoint& point,
                             const FrequencyGrid& grid, const FitnessConfig& cfg);

// Immutable shared scoring context; prepare() caches the exact response of
// every train point on the grid. Safe for concurrent objective() calls.
class EvalContext {
 public:
  EvalContext(const CircuitModel& model, const std::vector<DataPoint>& train,
              FrequencyGrid grid, FitnessConfig cfg, ChromosomeDims dims);

  EvaluationResult objective(const Chromosome& chrom) const;

  const CircuitModel& model() const { return *model_; }
  const std::vector<DataPoint>& train() const { return *train_; }
  const FrequencyGrid& grid() const { return grid_; }
  const FitnessConfig& config() const { return cfg_; }
  const ChromosomeDims& dims() const { return dims_; }

 private:
  const CircuitModel* model_;
  const std::vector<DataPoint>* train_;
  FrequencyGrid grid_;
  FitnessConfig cfg_;
  ChromosomeDims dims_;
  std::vector<std::vector<Complex>> exact_resp_;  // [point][freq]
};

}  // namespace dssa

#endif  // DSSA_FITNESS_HPP_
