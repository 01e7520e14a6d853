#include "dssa/fitness.hpp"

#include <algorithm>
#include <cmath>

namespace dssa {
namespace {

// Coefficient vectors of the decoded rational at one parameter sample.
void coeff_vectors(const SymbolicRational& sr, const std::vector<double>& values,
                   std::vector<double>& num, std::vector<double>& den) {
  num.resize(sr.num_polys.size());
  den.resize(sr.den_polys.size());
  for (std::size_t i = 0; i < sr.num_polys.size(); ++i)
    num[i] = evaluate_poly(sr.num_polys[i], values);
  for (std::size_t j = 0; j < sr.den_polys.size(); ++j)
    den[j] = evaluate_poly(sr.den_polys[j], values);
}

Complex eval_coeffs(const std::vector<double>& c, Complex s) {
  Complex acc = 0.0, pw = 1.0;
  for (double v : c) {
    acc += pw * v;
    pw *= s;
  }
  return acc;
}

// Magnitude (dB) + wrapped phase (rad) discrepancy for one (d, c) pair.
double point_error(Complex exact, Complex simplified, double clamp_db) {
  const double mag_s = std::abs(simplified);
  if (!(mag_s > 0.0) || !std::isfinite(mag_s)) return clamp_db;
  const double dmag = 20.0 * std::log10(std::abs(exact) / mag_s);
  const double dphi = std::abs(std::arg(exact * std::conj(simplified)));
  return std::min(std::abs(dmag), clamp_db) + dphi;
}

int structural_degree(const std::vector<SymbolicPolynomial>& polys) {
  for (int i = static_cast<int>(polys.size()) - 1; i >= 0; --i)
    if (!polys[i].empty()) return i;
  return -1;
}

int exact_degree(const std::vector<double>& coeffs) {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
    if (coeffs[i] != 0.0) return i;
  return -1;
}

}  // namespace

double RootMatch::max_error() const {
  // Unmatched exact roots count as 100% displacement; matched roots report
  // their actual relative displacement, uncapped, so that selection can
  // reward bringing a badly misplaced root closer even while it is still
  // far outside tolerance.
  double m = unmatched_exact > 0 ? 1.0 : 0.0;
  for (const auto& p : pairs) m = std::max(m, p.rel_error);
  return m;
}

double complexity(const Chromosome& chrom) {
  const int slots = chrom.dims.rows() * chrom.dims.max_terms;
  return static_cast<double>(chrom.active_terms()) / static_cast<double>(slots);
}

double response_error(const SymbolicRational& sr, const std::vector<DataPoint>& points,
                      const FrequencyGrid& grid, const FitnessConfig& cfg) {
  double acc = 0.0;
  std::vector<double> num, den;
  for (const auto& pt : points) {
    coeff_vectors(sr, pt.values, num, den);
    for (const auto& s : grid.points) {
      const Complex he = pt.exact.eval(s);
      const Complex dv = eval_coeffs(den, s);
      const Complex hs = std::abs(dv) < 1e-300 ? Complex(0.0) : eval_coeffs(num, s) / dv;
      acc += point_error(he, hs, cfg.error_clamp_db);
    }
  }
  return acc / (2.0 * static_cast<double>(points.size()) *
                static_cast<double>(grid.count()));
}

RootMatch match_roots(const std::vector<Complex>& simplified_roots,
                      const std::vector<Complex>& exact_roots, double zero_ref) {
  struct Candidate {
    double dist;
    int si, ei;
  };
  std::vector<Candidate> cands;
  cands.reserve(simplified_roots.size() * exact_roots.size());
  for (std::size_t i = 0; i < simplified_roots.size(); ++i) {
    for (std::size_t j = 0; j < exact_roots.size(); ++j) {
      double ref = std::abs(exact_roots[j]);
      if (ref == 0.0) ref = zero_ref;
      cands.push_back({std::abs(simplified_roots[i] - exact_roots[j]) / ref,
                       static_cast<int>(i), static_cast<int>(j)});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.si != b.si) return a.si < b.si;
    return a.ei < b.ei;
  });

  RootMatch out;
  std::vector<bool> s_used(simplified_roots.size(), false);
  std::vector<bool> e_used(exact_roots.size(), false);
  std::size_t want = std::min(simplified_roots.size(), exact_roots.size());
  for (const auto& c : cands) {
    if (out.pairs.size() == want) break;
    if (s_used[c.si] || e_used[c.ei]) continue;
    s_used[c.si] = e_used[c.ei] = true;
    out.pairs.push_back({simplified_roots[c.si], exact_roots[c.ei], c.dist});
  }
  out.unmatched_exact = static_cast<int>(exact_roots.size() - out.pairs.size());
  return out;
}

ConstraintSlacks constraints(const SymbolicRational& sr, const DataPoint& point,
                             const FrequencyGrid& grid, const FitnessConfig& cfg) {
  ConstraintSlacks sl;
  std::vector<double> num, den;
  coeff_vectors(sr, point.values, num, den);

  // Degree preservation: structural degrees equal the exact ones and no
  // exact-nonzero coefficient maps to an empty polynomial.
  bool degree_ok = structural_degree(sr.num_polys) == exact_degree(point.exact.num) &&
                   structural_degree(sr.den_polys) == exact_degree(point.exact.den);
  if (degree_ok) {
    for (std::size_t i = 0; i < point.exact.num.size() && degree_ok; ++i)
      if (point.exact.num[i] != 0.0 &&
          (i >= sr.num_polys.size() || sr.num_polys[i].empty()))
        degree_ok = false;
    for (std::size_t j = 0; j < point.exact.den.size() && degree_ok; ++j)
      if (point.exact.den[j] != 0.0 &&
          (j >= sr.den_polys.size() || sr.den_polys[j].empty()))
        degree_ok = false;
  }
  sl.degree = degree_ok ? 0.0 : 1.0;

  // dc-gain constraint.
  const double f0 = num.empty() ? 0.0 : num.front();
  const double g0 = den.empty() ? 0.0 : den.front();
  const bool simp_dc_finite = f0 != 0.0 && g0 != 0.0;
  if (point.exact_dc.finite) {
    if (simp_dc_finite) {
      const double simp_db = 20.0 * std::log10(std::abs(f0 / g0));
      // Saturate at the clamp: a wildly wrong finite dc must not score worse
      // than an undefined one (and bounded slacks keep selection meaningful).
      sl.dc = std::min(std::abs(simp_db - point.exact_dc.db),
                       cfg.error_clamp_db) - cfg.t_dc;
    } else {
      sl.dc = cfg.error_clamp_db;  // undefined simplified dc vs finite exact
    }
  } else {
    // No finite nonzero exact dc: compare at the lowest grid frequency.
    const Complex s0 = grid.points.empty() ? Complex(0.0, 1.0) : grid.points.front();
    const Complex he = point.exact.eval(s0);
    const Complex dv = eval_coeffs(den, s0);
    const Complex hs = std::abs(dv) < 1e-300 ? Complex(0.0) : eval_coeffs(num, s0) / dv;
    if (std::abs(hs) > 0.0 && std::abs(he) > 0.0)
      sl.dc = std::abs(20.0 * std::log10(std::abs(he) / std::abs(hs))) - cfg.t_dc;
    else
      sl.dc = cfg.error_clamp_db;
  }

  // Pole / zero displacement.
  const double zero_ref = grid.min_omega();
  auto simp_poles = find_roots(den);
  auto simp_zeros = find_roots(num);
  sl.pole = match_roots(simp_poles, point.exact_poles, zero_ref).max_error() - cfg.t_root;
  sl.zero = match_roots(simp_zeros, point.exact_zeros, zero_ref).max_error() - cfg.t_root;
  return sl;
}

EvalContext::EvalContext(const CircuitModel& model, const std::vector<DataPoint>& train,
                         FrequencyGrid grid, FitnessConfig cfg, ChromosomeDims dims)
    : model_(&model),
      train_(&train),
      grid_(std::move(grid)),
      cfg_(cfg),
      dims_(dims) {
  exact_resp_.reserve(train_->size());
  for (const auto& pt : *train_) {
    std::vector<Complex> row;
    row.reserve(grid_.count());
    for (const auto& s : grid_.points) row.push_back(pt.exact.eval(s));
    exact_resp_.push_back(std::move(row));
  }
}

EvaluationResult EvalContext::objective(const Chromosome& chrom) const {
  EvaluationResult res;
  res.complexity = complexity(chrom);

  const SymbolicRational sr = decode(chrom);
  const auto& train = *train_;
  res.per_point_dc_err.reserve(train.size());
  res.per_point_root_err.reserve(train.size());

  ConstraintSlacks worst;
  worst.dc = worst.pole = worst.zero = worst.degree = -1e300;
  double err_acc = 0.0;
  double penalty_acc = 0.0;
  std::vector<double> num, den;
  for (std::size_t d = 0; d < train.size(); ++d) {
    const DataPoint& pt = train[d];
    coeff_vectors(sr, pt.values, num, den);
    for (int c = 0; c < grid_.count(); ++c) {
      const Complex s = grid_.points[c];
      const Complex dv = eval_coeffs(den, s);
      const Complex hs = std::abs(dv) < 1e-300 ? Complex(0.0) : eval_coeffs(num, s) / dv;
      err_acc += point_error(exact_resp_[d][c], hs, cfg_.error_clamp_db);
    }
    const ConstraintSlacks sl = constraints(sr, pt, grid_, cfg_);
    worst.dc = std::max(worst.dc, sl.dc);
    worst.pole = std::max(worst.pole, sl.pole);
    worst.zero = std::max(worst.zero, sl.zero);
    worst.degree = std::max(worst.degree, sl.degree);
    penalty_acc += std::max(0.0, sl.dc / cfg_.t_dc) +
                   std::max(0.0, sl.pole / cfg_.t_root) +
                   std::max(0.0, sl.zero / cfg_.t_root) +
                   std::max(0.0, sl.degree);
    res.per_point_dc_err.push_back(sl.dc + cfg_.t_dc);
    res.per_point_root_err.push_back(
        std::max(sl.pole + cfg_.t_root, sl.zero + cfg_.t_root));
  }
  res.error = err_acc / (2.0 * static_cast<double>(train.size()) *
                         static_cast<double>(grid_.count()));
  res.violations = worst;
  res.feasible = worst.feasible();
  // Mean violation over train points, not the max: feasibility still
  // demands every point satisfied, but selection needs credit for shrinking
  // violations point by point, which a max would hide.
  const double penalty = penalty_acc / static_cast<double>(train.size());
  res.objective = cfg_.w1 * res.complexity + cfg_.w2 * res.error +
                  cfg_.penalty_lambda * penalty;
  return res;
}

}  // namespace dssa
