#include "dssa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "dssa/rng.hpp"

namespace dssa {
namespace {

SymbolicPoly mono(int spow, std::vector<int> params, long long coef) {
  SymbolicPoly p;
  std::sort(params.begin(), params.end());
  p.emplace(Monomial{spow, std::move(params)}, coef);
  return p;
}

void add_into(SymbolicPoly& dst, const SymbolicPoly& src, long long scale = 1) {
  for (const auto& [m, c] : src) {
    auto [it, inserted] = dst.emplace(m, c * scale);
    if (!inserted) {
      it->second += c * scale;
      if (it->second == 0) dst.erase(it);
    }
  }
}

SymbolicPoly multiply(const SymbolicPoly& a, const SymbolicPoly& b) {
  SymbolicPoly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m;
      m.spow = ma.spow + mb.spow;
      m.params.reserve(ma.params.size() + mb.params.size());
      std::merge(ma.params.begin(), ma.params.end(), mb.params.begin(),
                 mb.params.end(), std::back_inserter(m.params));
      auto [it, inserted] = out.emplace(std::move(m), ca * cb);
      if (!inserted) {
        it->second += ca * cb;
        if (it->second == 0) out.erase(it);
      }
    }
  }
  return out;
}

// Symbolic MNA matrix; entries are sparse polynomials over the parameters.
struct SymbolicPencil {
  std::vector<std::vector<SymbolicPoly>> a;
  std::vector<SymbolicPoly> b;
  int dim = 0;
  int out_index = 0;
};

SymbolicPencil build_symbolic(const CircuitModel& model) {
  const int n = model.node_count;
  SymbolicPencil p;
  p.dim = n + 1;
  p.a.assign(p.dim, std::vector<SymbolicPoly>(p.dim));
  p.b.assign(p.dim, {});
  p.out_index = model.output_node - 1;

  auto add = [&](int r, int c, const SymbolicPoly& v, long long sgn) {
    add_into(p.a[r][c], v, sgn);
  };

  for (const auto& e : model.elements) {
    const int k = e.parameter_index;
    const int spow = (e.kind == ElementKind::kCapacitance) ? 1 : 0;
    SymbolicPoly v = mono(spow, {k}, 1);
    if (e.kind == ElementKind::kVccs) {
      const int op = e.terminals[0], om = e.terminals[1];
      const int cp = e.terminals[2], cm = e.terminals[3];
      if (op > 0 && cp > 0) add(op - 1, cp - 1, v, +1);
      if (op > 0 && cm > 0) add(op - 1, cm - 1, v, -1);
      if (om > 0 && cp > 0) add(om - 1, cp - 1, v, -1);
      if (om > 0 && cm > 0) add(om - 1, cm - 1, v, +1);
    } else {
      const int a = e.terminals[0], b = e.terminals[1];
      if (a > 0) add(a - 1, a - 1, v, +1);
      if (b > 0) add(b - 1, b - 1, v, +1);
      if (a > 0 && b > 0) {
        add(a - 1, b - 1, v, -1);
        add(b - 1, a - 1, v, -1);
      }
    }
  }
  SymbolicPoly one = mono(0, {}, 1);
  const int in = model.input_node - 1;
  add(in, n, one, +1);
  add(n, in, one, +1);
  p.b[n] = one;
  return p;
}

// Cofactor expansion with memoized minors. Rows are always consumed top-down,
// so the active column mask alone identifies a minor.
class DeterminantExpander {
 public:
  explicit DeterminantExpander(const std::vector<std::vector<SymbolicPoly>>& a)
      : a_(a), dim_(static_cast<int>(a.size())) {}

  SymbolicPoly det() { return minor_det((1u << dim_) - 1u); }

 private:
  SymbolicPoly minor_det(std::uint32_t colmask) {
    if (colmask == 0) return mono(0, {}, 1);
    auto it = memo_.find(colmask);
    if (it != memo_.end()) return it->second;

    const int row = dim_ - std::popcount(colmask);  // rows consumed so far
    SymbolicPoly out;
    int sign = +1;
    for (int c = 0; c < dim_; ++c) {
      const std::uint32_t bit = 1u << c;
      if (!(colmask & bit)) continue;
      if (!a_[row][c].empty()) {
        SymbolicPoly sub = minor_det(colmask & ~bit);
        add_into(out, multiply(a_[row][c], sub), sign);
      }
      sign = -sign;
    }
    memo_.emplace(colmask, out);
    return out;
  }

  const std::vector<std::vector<SymbolicPoly>>& a_;
  int dim_;
  std::unordered_map<std::uint32_t, SymbolicPoly> memo_;
};

}  // namespace

ExactSymbolic::TermCount ExactSymbolic::term_count() const {
  TermCount t;
  t.num_terms = static_cast<int>(num.size());
  t.den_terms = static_cast<int>(den.size());
  t.total = t.num_terms + t.den_terms;
  return t;
}

int ExactSymbolic::num_degree() const {
  int d = 0;
  for (const auto& [m, c] : num) d = std::max(d, m.spow);
  return d;
}

int ExactSymbolic::den_degree() const {
  int d = 0;
  for (const auto& [m, c] : den) d = std::max(d, m.spow);
  return d;
}

bool ExactSymbolic::has_repeated_parameters() const {
  auto repeated = [](const SymbolicPoly& p) {
    for (const auto& [m, c] : p)
      if (std::adjacent_find(m.params.begin(), m.params.end()) != m.params.end())
        return true;
    return false;
  };
  return repeated(num) || repeated(den);
}

Complex ExactSymbolic::eval(const std::vector<double>& values, Complex s) const {
  auto eval_poly = [&](const SymbolicPoly& p) {
    Complex acc = 0.0;
    for (const auto& [m, c] : p) {
      Complex term = static_cast<double>(c);
      for (int k : m.params) term *= values[k];
      for (int i = 0; i < m.spow; ++i) term *= s;
      acc += term;
    }
    return acc;
  };
  return eval_poly(num) / eval_poly(den);
}

std::string ExactSymbolic::render(const CircuitModel& model) const {
  auto render_poly = [&](const SymbolicPoly& p) {
    if (p.empty()) return std::string("0");
    // Group by power of s for readability.
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : p) {
      if (!first) out << (c < 0 ? " - " : " + ");
      else if (c < 0) out << "-";
      first = false;
      long long mag = std::llabs(c);
      bool printed = false;
      if (mag != 1 || (m.params.empty() && m.spow == 0)) {
        out << mag;
        printed = true;
      }
      for (int i = 0; i < m.spow; ++i) {
        if (printed) out << "*";
        out << "s";
        printed = true;
      }
      for (int k : m.params) {
        if (printed) out << "*";
        out << model.parameters[k].name;
        printed = true;
      }
    }
    return out.str();
  };
  return "H(s) = (" + render_poly(num) + ") / (" + render_poly(den) + ")";
}

ExactSymbolic exact_symbolic(const CircuitModel& model) {
  if (model.node_count > kOracleNodeLimit) throw OracleScaleError(model.node_count);

  SymbolicPencil p = build_symbolic(model);
  ExactSymbolic out;
  {
    DeterminantExpander ex(p.a);
    out.den = ex.det();
  }
  {
    // Cramer: output column replaced by the excitation vector.
    auto a = p.a;
    for (int r = 0; r < p.dim; ++r) a[r][p.out_index] = p.b[r];
    DeterminantExpander ex(a);
    out.num = ex.det();
  }
  // Common-sign convention: leading (lowest-order) denominator term positive.
  if (!out.den.empty() && out.den.begin()->second < 0) {
    for (auto& [m, c] : out.den) c = -c;
    for (auto& [m, c] : out.num) c = -c;
  }
  return out;
}

double verify_consistency(const CircuitModel& model, int sample_count,
                          std::uint64_t seed) {
  if (sample_count <= 0) return 0.0;
  ExactSymbolic exact = exact_symbolic(model);
  Rng rng(seed);
  const int k = model.parameter_count();
  double worst = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    std::vector<double> values(k);
    for (int j = 0; j < k; ++j) {
      const Parameter& pr = model.parameters[j];
      values[j] = pr.lower + rng.uniform() * (pr.upper - pr.lower);
    }
    MnaPencil pencil = build_pencil(model, values);
    NumericRational nr = extract_coeffs(pencil);
    // s drawn log-uniform in magnitude around the extracted roots, random
    // phase, so both low- and high-frequency coefficients are exercised.
    auto roots = find_roots(nr.den);
    double w_lo = 1.0, w_hi = 1.0;
    if (!roots.empty()) {
      w_lo = w_hi = std::abs(roots[0]);
      for (const auto& r : roots) {
        w_lo = std::min(w_lo, std::abs(r));
        w_hi = std::max(w_hi, std::abs(r));
      }
    }
    const double lg = std::log10(std::max(w_lo, 1e-12) / 10.0);
    const double hg = std::log10(w_hi * 10.0);
    const double mag = std::pow(10.0, lg + rng.uniform() * (hg - lg));
    const double ang = rng.uniform() * 2.0 * 3.14159265358979323846;
    const Complex s = mag * Complex(std::cos(ang), std::sin(ang));

    const Complex he = exact.eval(values, s);
    const Complex hn = nr.eval(s);
    const double dev = std::abs(he - hn) / std::max(std::abs(he), 1e-300);
    worst = std::max(worst, dev);
  }
  return worst;
}

}  // namespace dssa
