#ifndef DSSA_SYMBOLIC_HPP_
#define DSSA_SYMBOLIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dssa/netlist.hpp"
#include "dssa/numeric.hpp"

namespace dssa {

// Signed product of parameters. An all-false presence vector is the
// constant +/-1 (empty-product convention).
struct SymbolicTerm {
  int sign = +1;  // -1 or +1
  std::vector<bool> present;  // length K

  bool operator==(const SymbolicTerm&) const = default;
};

struct SymbolicPolynomial {
  std::vector<SymbolicTerm> terms;  // at most T entries

  bool empty() const { return terms.empty(); }
  bool operator==(const SymbolicPolynomial&) const = default;
};

// Decoded simplified transfer function: one polynomial per power of s.
struct SymbolicRational {
  std::vector<SymbolicPolynomial> num_polys;  // s^0 .. s^M
  std::vector<SymbolicPolynomial> den_polys;  // s^0 .. s^N

  bool operator==(const SymbolicRational&) const = default;
};

// Problem dimensions shared by chromosomes of one run.
struct ChromosomeDims {
  int num_degree = 0;  // M
  int den_degree = 0;  // N
  int param_count = 0; // K
  int max_terms = 0;   // T

  int rows() const { return num_degree + den_degree + 2; }         // P
  int cols() const { return max_terms * (param_count + 1); }       // Q

  bool operator==(const ChromosomeDims&) const = default;
};

// P x Q gene matrix. Row p, slot t: K binary parameter-presence genes then
// one ternary term selector in {-1, 0, +1}.
struct Chromosome {
  ChromosomeDims dims;
  std::vector<std::int8_t> genes;  // row-major P x Q

  std::int8_t& at(int p, int q) { return genes[p * dims.cols() + q]; }
  std::int8_t at(int p, int q) const { return genes[p * dims.cols() + q]; }

  std::int8_t selector(int p, int t) const { return at(p, t * (dims.param_count + 1) + dims.param_count); }
  std::int8_t s_gene(int p, int t, int k) const { return at(p, t * (dims.param_count + 1) + k); }

  bool is_selector_column(int q) const { return q % (dims.param_count + 1) == dims.param_count; }

  int gene_count() const { return dims.rows() * dims.cols(); }
  int active_terms() const;

  bool operator==(const Chromosome&) const = default;
};

// Decoded simplified function: slots with a nonzero
// selector emit one signed term; absent slots emit nothing.
SymbolicRational decode(const Chromosome& chrom);

double evaluate_poly(const SymbolicPolynomial& poly, const std::vector<double>& values);

// (sum_i s^i f_i(x)) / (sum_j s^j g_j(x)). A vanishing denominator is the
// caller's "simplified-singular" signal, reported via the bool.
Complex evaluate_rational(const SymbolicRational& sr, const std::vector<double>& values,
                          Complex s, bool* singular = nullptr);

// Merges duplicate presence vectors by net sign (emitted as repeated signed
// terms), drops cancelled pairs, sorts by descending parameter count then
// lexicographic names. Evaluation-preserving.
SymbolicPolynomial canonicalize(const SymbolicPolynomial& poly, const CircuitModel& model);

// Whole-rational canonical form: per-polynomial canonicalization plus a
// global sign flip so the first surviving denominator term is positive
// (multiplying num and den by -1 leaves H unchanged).
SymbolicRational canonicalize(const SymbolicRational& sr, const CircuitModel& model);

std::string render(const SymbolicRational& sr, const CircuitModel& model);

}  // namespace dssa

#endif  // DSSA_SYMBOLIC_HPP_
