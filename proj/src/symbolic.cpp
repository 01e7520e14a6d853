#include "dssa/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dssa {

int Chromosome::active_terms() const {
  int n = 0;
  for (int p = 0; p < dims.rows(); ++p)
    for (int t = 0; t < dims.max_terms; ++t)
      if (selector(p, t) != 0) ++n;
  return n;
}

SymbolicRational decode(const Chromosome& chrom) {
  const ChromosomeDims& d = chrom.dims;
  if (static_cast<int>(chrom.genes.size()) != d.rows() * d.cols())
    throw std::invalid_argument("decode: gene matrix does not match dimensions");

  SymbolicRational sr;
  sr.num_polys.resize(d.num_degree + 1);
  sr.den_polys.resize(d.den_degree + 1);
  for (int p = 0; p < d.rows(); ++p) {
    SymbolicPolynomial& poly = p <= d.num_degree
                                   ? sr.num_polys[p]
                                   : sr.den_polys[p - d.num_degree - 1];
    for (int t = 0; t < d.max_terms; ++t) {
      const int ts = chrom.selector(p, t);
      if (ts == 0) continue;
      SymbolicTerm term;
      term.sign = ts;
      term.present.resize(d.param_count);
      for (int k = 0; k < d.param_count; ++k)
        term.present[k] = chrom.s_gene(p, t, k) != 0;
      poly.terms.push_back(std::move(term));
    }
  }
  return sr;
}

double evaluate_poly(const SymbolicPolynomial& poly, const std::vector<double>& values) {
  double acc = 0.0;
  for (const auto& term : poly.terms) {
    double prod = term.sign;
    for (std::size_t k = 0; k < term.present.size(); ++k)
      if (term.present[k]) prod *= values[k];
    acc += prod;
  }
  return acc;
}

Complex evaluate_rational(const SymbolicRational& sr, const std::vector<double>& values,
                          Complex s, bool* singular) {
  Complex num = 0.0, den = 0.0, pw = 1.0;
  for (const auto& poly : sr.num_polys) {
    num += pw * evaluate_poly(poly, values);
    pw *= s;
  }
  pw = 1.0;
  for (const auto& poly : sr.den_polys) {
    den += pw * evaluate_poly(poly, values);
    pw *= s;
  }
  if (std::abs(den) < 1e-300) {
    if (singular) *singular = true;
    return Complex(0.0, 0.0);
  }
  if (singular) *singular = false;
  return num / den;
}

namespace {

// Sort key: descending parameter count, then lexicographic parameter names.
bool term_before(const SymbolicTerm& a, const SymbolicTerm& b,
                 const CircuitModel& model) {
  auto names = [&](const SymbolicTerm& t) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < t.present.size(); ++k)
      if (t.present[k]) out.push_back(model.parameters[k].name);
    std::sort(out.begin(), out.end());
    return out;
  };
  auto na = names(a), nb = names(b);
  if (na.size() != nb.size()) return na.size() > nb.size();
  return na < nb;
}

}  // namespace

SymbolicPolynomial canonicalize(const SymbolicPolynomial& poly, const CircuitModel& model) {
  // Net signed multiplicity per distinct presence vector.
  std::vector<std::pair<std::vector<bool>, int>> net;
  for (const auto& term : poly.terms) {
    auto it = std::find_if(net.begin(), net.end(),
                           [&](const auto& e) { return e.first == term.present; });
    if (it == net.end()) net.emplace_back(term.present, term.sign);
    else it->second += term.sign;
  }
  SymbolicPolynomial out;
  for (const auto& [present, coef] : net) {
    for (int i = 0; i < std::abs(coef); ++i)
      out.terms.push_back({coef < 0 ? -1 : +1, present});
  }
  std::stable_sort(out.terms.begin(), out.terms.end(),
                   [&](const SymbolicTerm& a, const SymbolicTerm& b) {
                     return term_before(a, b, model);
                   });
  return out;
}

SymbolicRational canonicalize(const SymbolicRational& sr, const CircuitModel& model) {
  SymbolicRational out;
  out.num_polys.reserve(sr.num_polys.size());
  out.den_polys.reserve(sr.den_polys.size());
  for (const auto& p : sr.num_polys) out.num_polys.push_back(canonicalize(p, model));
  for (const auto& p : sr.den_polys) out.den_polys.push_back(canonicalize(p, model));
  int lead = 0;
  for (const auto& p : out.den_polys) {
    if (!p.terms.empty()) {
      lead = p.terms.front().sign;
      break;
    }
  }
  if (lead < 0) {
    for (auto& p : out.num_polys)
      for (auto& t : p.terms) t.sign = -t.sign;
    for (auto& p : out.den_polys)
      for (auto& t : p.terms) t.sign = -t.sign;
  }
  return out;
}

namespace {

std::string render_poly(const SymbolicPolynomial& poly, const CircuitModel& model,
                        int power) {
  std::ostringstream out;
  bool first = true;
  for (const auto& term : poly.terms) {
    if (!first) out << (term.sign < 0 ? " - " : " + ");
    else if (term.sign < 0) out << "-";
    first = false;
    bool printed = false;
    for (std::size_t k = 0; k < term.present.size(); ++k) {
      if (!term.present[k]) continue;
      if (printed) out << "·";
      out << model.parameters[k].name;
      printed = true;
    }
    if (!printed) out << "1";
  }
  if (first) return "0";
  std::string body = out.str();
  if (power == 0) return body;
  std::string prefix = power == 1 ? "s·" : "s^" + std::to_string(power) + "·";
  if (poly.terms.size() > 1 || poly.terms.front().sign < 0)
    return prefix + "(" + body + ")";
  return prefix + body;
}

std::string render_side(const std::vector<SymbolicPolynomial>& polys,
                        const CircuitModel& model) {
  std::string out;
  bool any = false;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].empty()) continue;
    if (any) out += " + ";
    out += render_poly(polys[i], model, static_cast<int>(i));
    any = true;
  }
  return any ? out : "0";
}

}  // namespace

std::string render(const SymbolicRational& sr, const CircuitModel& model) {
  return "H(s) = (" + render_side(sr.num_polys, model) + ") / (" +
         render_side(sr.den_polys, model) + ")";
}

}  // namespace dssa
