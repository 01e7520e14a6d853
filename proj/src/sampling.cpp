#include "dssa/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dssa {

double nominal_omega0(const CircuitModel& model) {
  std::vector<double> nominal(model.parameter_count());
  for (int k = 0; k < model.parameter_count(); ++k)
    nominal[k] = model.parameters[k].nominal;
  MnaPencil pencil = build_pencil(model, nominal);
  NumericRational first = extract_coeffs(pencil, bootstrap_omega(model));
  auto roots = find_roots(first.den);
  double acc = 0.0;
  int n = 0;
  for (const auto& r : roots)
    if (std::abs(r) > 0.0) {
      acc += std::log(std::abs(r));
      ++n;
    }
  return n > 0 ? std::exp(acc / n) : bootstrap_omega(model);
}

std::vector<DataPoint> sample_dataset(const CircuitModel& model, int d_count,
                                      Rng& rng, double omega0) {
  if (d_count < 1) throw std::invalid_argument("sample_dataset: D must be >= 1");
  if (omega0 <= 0.0) omega0 = nominal_omega0(model);
  const int k = model.parameter_count();
  std::vector<DataPoint> points;
  points.reserve(d_count);
  for (int d = 0; d < d_count; ++d) {
    DataPoint pt;
    for (int attempt = 0;; ++attempt) {
      pt.values.resize(k);
      for (int j = 0; j < k; ++j) {
        const Parameter& pr = model.parameters[j];
        pt.values[j] = pr.lower + rng.uniform() * (pr.upper - pr.lower);
      }
      try {
        MnaPencil pencil = build_pencil(model, pt.values);
        pt.exact = extract_coeffs(pencil, omega0);
        break;
      } catch (const SingularSystemError&) {
        if (attempt >= 3) throw;
      }
    }
    pt.exact_poles = find_roots(pt.exact.den);
    pt.exact_zeros = find_roots(pt.exact.num);
    pt.exact_dc = dc_gain(pt.exact);
    points.push_back(std::move(pt));
  }
  return points;
}

Dataset split(std::vector<DataPoint> points, int d_train, int d_test, Rng& rng) {
  if (d_train + d_test != static_cast<int>(points.size()))
    throw std::invalid_argument("split: D_train + D_test != point count");
  std::vector<int> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  // Fisher-Yates on our stream (std::shuffle is implementation-defined).
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.uniform_index(i)]);
  Dataset ds;
  ds.train.reserve(d_train);
  ds.test.reserve(d_test);
  for (int i = 0; i < d_train; ++i) ds.train.push_back(std::move(points[order[i]]));
  for (int i = 0; i < d_test; ++i) ds.test.push_back(std::move(points[order[d_train + i]]));
  return ds;
}

FrequencyGrid frequency_grid(const NumericRational& nominal_exact,
                             int points_per_decade) {
  std::vector<Complex> roots = find_roots(nominal_exact.den);
  auto zeros = find_roots(nominal_exact.num);
  roots.insert(roots.end(), zeros.begin(), zeros.end());

  double lo_log, decades;
  double fmin = 0.0, fmax = 0.0;
  for (const auto& r : roots) {
    const double f = std::abs(r) / (2.0 * std::numbers::pi);
    if (f <= 0.0) continue;
    if (fmin == 0.0 || f < fmin) fmin = f;
    fmax = std::max(fmax, f);
  }
  if (fmin == 0.0) {
    lo_log = 0.0;  // default 1 Hz .. 1 GHz for pure-gain rationals
    decades = 9.0;
  } else {
    lo_log = std::log10(fmin) - 1.0;
    const double hi_log = std::log10(fmax) + 1.0;
    decades = std::ceil(hi_log - lo_log - 1e-9);  // whole decades
  }

  FrequencyGrid grid;
  const int c = static_cast<int>(decades) * points_per_decade + 1;
  grid.points.reserve(c);
  grid.freqs_hz.reserve(c);
  for (int i = 0; i < c; ++i) {
    const double f = std::pow(10.0, lo_log + static_cast<double>(i) / points_per_decade);
    grid.freqs_hz.push_back(f);
    grid.points.emplace_back(0.0, 2.0 * std::numbers::pi * f);
  }
  return grid;
}

}  // namespace dssa
