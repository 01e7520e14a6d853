#ifndef DSSA_NUMERIC_HPP_
#define DSSA_NUMERIC_HPP_

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dssa/netlist.hpp"

namespace dssa {

using Complex = std::complex<double>;

// MNA pencil (G + s*C) v = b for one numeric parameter sample. Size is
// node_count + 1: node voltages plus the branch current of the unit input
// voltage source.
struct MnaPencil {
  Eigen::MatrixXd G;
  Eigen::MatrixXd C;
  Eigen::VectorXd b;
  int out_index = 0;
};

// Expanded-form transfer function with real coefficients, ascending powers
// of s. den is normalized to unit max-magnitude coefficient; num carries the
// same scale factor.
struct NumericRational {
  std::vector<double> num;  // f_0 .. f_M
  std::vector<double> den;  // g_0 .. g_N

  int num_degree() const { return static_cast<int>(num.size()) - 1; }
  int den_degree() const { return static_cast<int>(den.size()) - 1; }
  Complex eval(Complex s) const;
};

struct DcGain {
  double db = 0.0;
  int sign = +1;
  bool finite = true;  // false when f_0 or g_0 vanished
};

class SingularSystemError : public std::runtime_error {
 public:
  explicit SingularSystemError(double rcond)
      : std::runtime_error("singular MNA system (rcond estimate " +
                           std::to_string(rcond) + ")"),
        rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

MnaPencil build_pencil(const CircuitModel& model, const std::vector<double>& values);

// H(s) = V(out) from solving (G + s*C) v = b. Throws SingularSystemError.
Complex eval_response(const MnaPencil& pencil, Complex s);

// Bootstrap characteristic frequency 1/sqrt(mean R * mean C) at nominal.
double bootstrap_omega(const CircuitModel& model);

// Exact coefficient vectors by evaluate-and-interpolate at Chebyshev-spaced
// real frequencies. omega0 <= 0 requests the two-pass bootstrap (first pass
// with bootstrap_omega, refined with the geometric mean of the resulting
// denominator root magnitudes).
NumericRational extract_coeffs(const MnaPencil& pencil, double omega0 = 0.0);

// All roots of a real-coefficient polynomial (ascending coefficients) via
// companion-matrix eigenvalues, each polished with one Newton step.
// Degree <= 0 after trimming yields an empty list.
std::vector<Complex> find_roots(const std::vector<double>& coeffs);

DcGain dc_gain(const NumericRational& r);

constexpr double kTrimEps = 1e-9;  // relative degree-trim threshold

// Zeroes coefficients below kTrimEps * max|coef| and drops trailing zeros.
void trim_coeffs(std::vector<double>& coeffs);

}  // namespace dssa

#endif  // DSSA_NUMERIC_HPP_
