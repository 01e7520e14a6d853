#ifndef DSSA_SAMPLING_HPP_
#define DSSA_SAMPLING_HPP_

#include <vector>

#include "dssa/numeric.hpp"
#include "dssa/rng.hpp"

namespace dssa {

// One Monte Carlo sample with its exact characterization cached.
struct DataPoint {
  std::vector<double> values;        // x_k^d, within [L_k, H_k]
  NumericRational exact;
  std::vector<Complex> exact_poles;  // roots of exact.den
  std::vector<Complex> exact_zeros;  // roots of exact.num
  DcGain exact_dc;
};

struct Dataset {
  std::vector<DataPoint> train;
  std::vector<DataPoint> test;
};

struct FrequencyGrid {
  std::vector<Complex> points;     // s_c = j*2*pi*f_c, strictly increasing f
  std::vector<double> freqs_hz;
  int count() const { return static_cast<int>(points.size()); }
  // Lowest angular frequency; normalizes root errors against exact roots at 0.
  double min_omega() const { return freqs_hz.empty() ? 1.0 : 2.0 * 3.14159265358979323846 * freqs_hz.front(); }
};

// Characteristic frequency from the nominal-point extraction: geometric mean
// of the nominal denominator root magnitudes (bootstrapped internally).
// Shared by all per-point extractions of a run.
double nominal_omega0(const CircuitModel& model);

// Draws D points x_k^d = L_k + r (H_k - L_k), r uniform on [0,1), and caches
// the exact rational, roots and dc-gain of each. A point whose extraction
// fails is redrawn (3 retries, then the error propagates).
std::vector<DataPoint> sample_dataset(const CircuitModel& model, int d_count,
                                      Rng& rng, double omega0 = 0.0);

// Uniform random partition without replacement.
Dataset split(std::vector<DataPoint> points, int d_train, int d_test, Rng& rng);

// Logarithmic grid spanning one decade below the smallest nominal root
// magnitude to one decade above the largest, whole decades, points_per_decade
// log-spaced points each, endpoints inclusive. A rootless rational falls back
// to 1 Hz .. 1 GHz.
FrequencyGrid frequency_grid(const NumericRational& nominal_exact,
                             int points_per_decade);

}  // namespace dssa

#endif  // DSSA_SAMPLING_HPP_
