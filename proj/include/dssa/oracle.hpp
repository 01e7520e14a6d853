#ifndef DSSA_ORACLE_HPP_
#define DSSA_ORACLE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dssa/numeric.hpp"

namespace dssa {

// Monomial: s^spow times a product of parameters (indices sorted, repeats
// allowed so that structural violations stay visible).
struct Monomial {
  int spow = 0;
  std::vector<int> params;

  auto operator<=>(const Monomial&) const = default;
};

using SymbolicPoly = std::map<Monomial, long long>;

// Fully expanded exact transfer function; the brute-force ground truth the
// GA path is validated against.
struct ExactSymbolic {
  SymbolicPoly num;
  SymbolicPoly den;

  struct TermCount {
    int num_terms = 0;
    int den_terms = 0;
    int total = 0;
  };
  TermCount term_count() const;

  int num_degree() const;
  int den_degree() const;

  // True if any stored term contains a repeated parameter symbol (cannot
  // happen for RCgm circuits; reported, never silently dropped).
  bool has_repeated_parameters() const;

  Complex eval(const std::vector<double>& values, Complex s) const;

  std::string render(const CircuitModel& model) const;
};

inline constexpr int kOracleNodeLimit = 8;

class OracleScaleError : public std::runtime_error {
 public:
  explicit OracleScaleError(int nodes)
      : std::runtime_error("oracle not applicable at this scale (" +
                           std::to_string(nodes) + " nodes, limit " +
                           std::to_string(kOracleNodeLimit) + ")") {}
};

// Exact symbolic H(s) by memoized cofactor expansion of the symbolic MNA
// determinant, numerator via Cramer's rule on the output column. Like terms
// combined, zero terms cancelled. Throws OracleScaleError above the node
// guard.
ExactSymbolic exact_symbolic(const CircuitModel& model);

// Max relative deviation between oracle evaluation and the interpolated
// numeric rational over sample_count random (values, s) pairs.
double verify_consistency(const CircuitModel& model, int sample_count,
                          std::uint64_t seed);

}  // namespace dssa

#endif  // DSSA_ORACLE_HPP_
