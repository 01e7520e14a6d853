#include "dssa/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dssa {
namespace {

// Horner evaluation, ascending coefficients.
Complex poly_eval(const std::vector<double>& c, Complex s) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Complex poly_deriv_eval(const std::vector<double>& c, Complex s) {
  Complex acc = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 1; --i)
    acc = acc * s + static_cast<double>(i) * c[i];
  return acc;
}

// Fits ascending coefficients of the degree-(m-1) interpolant through
// (x_i, y_i) by QR on the Vandermonde system.
Eigen::VectorXd fit_polynomial(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int m = static_cast<int>(x.size());
  Eigen::MatrixXd v(m, m);
  for (int i = 0; i < m; ++i) {
    double p = 1.0;
    for (int j = 0; j < m; ++j) {
      v(i, j) = p;
      p *= x[i];
    }
  }
  return v.colPivHouseholderQr().solve(y);
}

}  // namespace

Complex NumericRational::eval(Complex s) const {
  return poly_eval(num, s) / poly_eval(den, s);
}

MnaPencil build_pencil(const CircuitModel& model, const std::vector<double>& values) {
  const int n = model.node_count;
  const int dim = n + 1;  // + source branch current
  MnaPencil p;
  p.G = Eigen::MatrixXd::Zero(dim, dim);
  p.C = Eigen::MatrixXd::Zero(dim, dim);
  p.b = Eigen::VectorXd::Zero(dim);
  p.out_index = model.output_node - 1;

  auto stamp2 = [&](Eigen::MatrixXd& m, int a, int b, double v) {
    // a, b are 1-based node ids; ground rows/cols are dropped.
    if (a > 0) m(a - 1, a - 1) += v;
    if (b > 0) m(b - 1, b - 1) += v;
    if (a > 0 && b > 0) {
      m(a - 1, b - 1) -= v;
      m(b - 1, a - 1) -= v;
    }
  };

  for (const auto& e : model.elements) {
    const double v = values[e.parameter_index];
    switch (e.kind) {
      case ElementKind::kConductance:
        stamp2(p.G, e.terminals[0], e.terminals[1], v);
        break;
      case ElementKind::kCapacitance:
        stamp2(p.C, e.terminals[0], e.terminals[1], v);
        break;
      case ElementKind::kVccs: {
        const int op = e.terminals[0], om = e.terminals[1];
        const int cp = e.terminals[2], cm = e.terminals[3];
        if (op > 0 && cp > 0) p.G(op - 1, cp - 1) += v;
        if (op > 0 && cm > 0) p.G(op - 1, cm - 1) -= v;
        if (om > 0 && cp > 0) p.G(om - 1, cp - 1) -= v;
        if (om > 0 && cm > 0) p.G(om - 1, cm - 1) += v;
        break;
      }
    }
  }

  // Unit voltage source at the input node: branch current column into the
  // node's KCL row, plus the row v_in = 1.
  const int in = model.input_node - 1;
  p.G(in, n) = 1.0;
  p.G(n, in) = 1.0;
  p.b(n) = 1.0;
  return p;
}

Complex eval_response(const MnaPencil& pencil, Complex s) {
  Eigen::MatrixXcd a = pencil.G.cast<Complex>() + s * pencil.C.cast<Complex>();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) throw SingularSystemError(rcond);
  Eigen::VectorXcd v = lu.solve(pencil.b.cast<Complex>());
  return v(pencil.out_index);
}

double bootstrap_omega(const CircuitModel& model) {
  double r_sum = 0.0, c_sum = 0.0;
  int r_n = 0, c_n = 0;
  for (const auto& e : model.elements) {
    const double v = model.parameters[e.parameter_index].nominal;
    if (e.kind == ElementKind::kConductance) {
      r_sum += 1.0 / v;
      ++r_n;
    } else if (e.kind == ElementKind::kCapacitance) {
      c_sum += v;
      ++c_n;
    }
  }
  if (r_n == 0 || c_n == 0) return 1.0;
  return 1.0 / std::sqrt((r_sum / r_n) * (c_sum / c_n));
}

void trim_coeffs(std::vector<double>& coeffs) {
  double peak = 0.0;
  for (double c : coeffs) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) {
    coeffs.assign(1, 0.0);
    return;
  }
  for (double& c : coeffs)
    if (std::abs(c) < kTrimEps * peak) c = 0.0;
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
}

namespace {

struct SampledPencil {
  Eigen::VectorXd x;      // normalized sample abscissae s/omega0
  Eigen::VectorXd det;    // det(G + s C), scaled to unit max
  Eigen::VectorXd numer;  // H(s) * det, same scale
};

// Evaluates determinant and Cramer numerator at m Chebyshev-spaced real
// frequencies on [-span, span]*omega0.
SampledPencil sample_pencil(const MnaPencil& pencil, double omega0, double span) {
  const int m = static_cast<int>(pencil.G.rows()) + 1;
  SampledPencil out;
  out.x.resize(m);
  out.det.resize(m);
  out.numer.resize(m);
  int singular = 0;
  for (int i = 0; i < m; ++i) {
    double xi = span * std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * m));
    for (int attempt = 0;; ++attempt) {
      Eigen::MatrixXd a = pencil.G + (xi * omega0) * pencil.C;
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rcond() > 1e-13 || attempt >= 2) {
        if (lu.rcond() <= 1e-13) ++singular;
        out.x[i] = xi;
        out.det[i] = lu.determinant();
        Eigen::VectorXd v = lu.solve(pencil.b);
        out.numer[i] = v(pencil.out_index) * out.det[i];
        break;
      }
      xi *= 1.0371;  // nudge off the singular frequency
    }
  }
  if (2 * singular > m)
    throw SingularSystemError(0.0);
  const double scale = std::max(out.det.cwiseAbs().maxCoeff(),
                                std::numeric_limits<double>::min());
  out.det /= scale;
  out.numer /= scale;
  return out;
}

NumericRational extract_once(const MnaPencil& pencil, double omega0) {
  SampledPencil sp;
  try {
    sp = sample_pencil(pencil, omega0, 2.0);
  } catch (const SingularSystemError&) {
    sp = sample_pencil(pencil, omega0, 3.1);  // one full resample, then give up
  }
  Eigen::VectorXd dc = fit_polynomial(sp.x, sp.det);
  Eigen::VectorXd nc = fit_polynomial(sp.x, sp.numer);

  NumericRational r;
  r.den.assign(dc.data(), dc.data() + dc.size());
  r.num.assign(nc.data(), nc.data() + nc.size());
  trim_coeffs(r.den);
  trim_coeffs(r.num);

  // Denormalize s' = s/omega0, then rescale to unit max denominator.
  double pw = 1.0;
  for (std::size_t j = 0; j < r.den.size(); ++j, pw /= omega0) r.den[j] *= pw;
  pw = 1.0;
  for (std::size_t j = 0; j < r.num.size(); ++j, pw /= omega0) r.num[j] *= pw;
  double peak = 0.0;
  for (double c : r.den) peak = std::max(peak, std::abs(c));
  if (peak > 0.0) {
    for (double& c : r.den) c /= peak;
    for (double& c : r.num) c /= peak;
  }
  return r;
}

// Backward error of an extraction: worst relative deviation between the
// rational and direct pencil solves, probed log-spaced across the band the
// extracted roots span (one decade margin each side). Probes on a 45-degree
// ray to stay clear of near-axis poles.
double backward_error(const MnaPencil& pencil, const NumericRational& r,
                      double band_lo, double band_hi) {
  // The band must not depend on the candidate itself: an extraction that
  // lost a root would otherwise score itself only where it happens to fit.
  const double w_lo = std::max(band_lo, 1e-300);
  const double w_hi = std::max(band_hi, w_lo * 10.0);
  const int probes =
      std::max(17, static_cast<int>(2.0 * std::log10(w_hi / w_lo)) + 1);
  const double step = std::log(w_hi / w_lo) / (probes - 1);
  const Complex ray = std::polar(1.0, 0.25 * 3.14159265358979323846);
  double worst = 0.0;
  int solved = 0;
  for (int i = 0; i < probes; ++i) {
    Complex s = w_lo * std::exp(step * i) * ray;
    for (int nudge = 0; nudge < 3; ++nudge) {
      try {
        const Complex direct = eval_response(pencil, s);
        const Complex interp = r.eval(s);
        worst = std::max(worst, std::abs(direct - interp) /
                                    std::max(std::abs(direct), 1e-300));
        ++solved;
        break;
      } catch (const SingularSystemError&) {
        s *= 1.0371;  // step off a resonance and retry
      }
    }
  }
  if (solved < probes / 2) return std::numeric_limits<double>::infinity();
  return worst;
}

}  // namespace

NumericRational extract_coeffs(const MnaPencil& pencil, double omega0) {
  if (omega0 > 0.0) return extract_once(pencil, omega0);

  // Bootstrap: the right normalization frequency is unknown, and a bad guess
  // silently trims true leading/trailing coefficients. Try a ladder of
  // candidates around the pencil's magnitude balance, score each extraction
  // by its backward error against direct solves, and refine the winner once
  // with the geometric mean of its denominator root magnitudes.
  const double g_norm = pencil.G.cwiseAbs().maxCoeff();
  const double c_norm = pencil.C.cwiseAbs().maxCoeff();
  const double base = (c_norm > 0.0 && g_norm > 0.0) ? g_norm / c_norm : 1.0;
  const double band_lo = base * 1e-15;
  const double band_hi = base * 1e3;

  NumericRational best;
  double best_err = std::numeric_limits<double>::infinity();
  auto consider = [&](double w) {
    if (!(w > 0.0) || !std::isfinite(w)) return;
    NumericRational cand;
    try {
      cand = extract_once(pencil, w);
    } catch (const SingularSystemError&) {
      return;
    }
    const double err = backward_error(pencil, cand, band_lo, band_hi);
    if (err < best_err) {
      best_err = err;
      best = std::move(cand);
    }
  };
  for (int k = -14; k <= 2; k += 2) consider(base * std::pow(10.0, k));

  if (!std::isfinite(best_err)) throw SingularSystemError(0.0);

  // Root-based refinement of the winner.
  auto roots = find_roots(best.den);
  double acc = 0.0;
  int n = 0;
  for (const auto& r : roots) {
    if (std::abs(r) > 0.0) {
      acc += std::log(std::abs(r));
      ++n;
    }
  }
  if (n > 0) consider(std::exp(acc / n));
  return best;
}

namespace {

// Newton polish on the original polynomial; guarded against huge steps near
// derivative zeros.
void polish_root(const std::vector<double>& c, Complex& r) {
  for (int pass = 0; pass < 2; ++pass) {
    Complex d = poly_deriv_eval(c, r);
    if (!(std::abs(d) > 0.0)) return;
    Complex step = poly_eval(c, r) / d;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag()) ||
        std::abs(step) > 0.5 * std::abs(r) + 1e-300)
      return;
    r -= step;
  }
}

}  // namespace

std::vector<Complex> find_roots(const std::vector<double>& coeffs) {
  // Only exact trailing zeros fix the degree here; noise trimming already
  // happens, scale-relative, inside extract_coeffs. Physical coefficient
  // vectors legitimately span many orders of magnitude.
  std::vector<double> c = coeffs;
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  std::vector<Complex> roots;
  if (deg <= 0) return roots;

  if (deg == 1) {
    roots.push_back(Complex(-c[0] / c[1], 0.0));
    return roots;
  }
  if (deg == 2) {
    // Numerically safe quadratic formula.
    const double a = c[2], b = c[1], k = c[0];
    const double disc = b * b - 4.0 * a * k;
    if (disc >= 0.0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      if (q != 0.0) {
        roots.push_back(Complex(q / a, 0.0));
        roots.push_back(Complex(k / q, 0.0));
      } else {
        roots.assign(2, Complex(0.0, 0.0));
      }
    } else {
      const double re = -b / (2.0 * a), im = std::sqrt(-disc) / (2.0 * a);
      roots.push_back(Complex(re, im));
      roots.push_back(Complex(re, -im));
    }
    return roots;
  }

  // Variable scaling keeps the solve balanced across pF/mS spreads.
  double scale = 1.0;
  if (c[0] != 0.0 && c[deg] != 0.0)
    scale = std::pow(std::abs(c[0] / c[deg]), 1.0 / deg);
  std::vector<double> cs(c.size());
  double pw = 1.0;
  for (int j = 0; j <= deg; ++j, pw *= scale) cs[j] = c[j] * pw;

  if (deg == 3) {
    // Closed-form cubic (trigonometric / Cardano branches).
    const double a = cs[2] / cs[3], b = cs[1] / cs[3], k = cs[0] / cs[3];
    const double q = (a * a - 3.0 * b) / 9.0;
    const double r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * k) / 54.0;
    if (r * r < q * q * q) {
      const double theta = std::acos(r / std::sqrt(q * q * q));
      const double m = -2.0 * std::sqrt(q);
      roots.push_back(Complex(m * std::cos(theta / 3.0) - a / 3.0, 0.0));
      roots.push_back(Complex(m * std::cos((theta + 2.0 * std::numbers::pi) / 3.0) - a / 3.0, 0.0));
      roots.push_back(Complex(m * std::cos((theta - 2.0 * std::numbers::pi) / 3.0) - a / 3.0, 0.0));
    } else {
      const double big = -std::copysign(
          std::cbrt(std::abs(r) + std::sqrt(r * r - q * q * q)), r);
      const double small = big != 0.0 ? q / big : 0.0;
      roots.push_back(Complex(big + small - a / 3.0, 0.0));
      const double re = -0.5 * (big + small) - a / 3.0;
      const double im = 0.5 * std::sqrt(3.0) * (big - small);
      roots.push_back(Complex(re, im));
      roots.push_back(Complex(re, -im));
    }
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -cs[i] / cs[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
  }

  for (auto& r : roots) {
    r *= scale;
    polish_root(c, r);
  }
  return roots;
}

DcGain dc_gain(const NumericRational& r) {
  DcGain g;
  const double f0 = r.num.empty() ? 0.0 : r.num.front();
  const double g0 = r.den.empty() ? 0.0 : r.den.front();
  if (f0 == 0.0 || g0 == 0.0) {
    g.finite = false;
    return g;
  }
  const double ratio = f0 / g0;
  g.db = 20.0 * std::log10(std::abs(ratio));
  g.sign = ratio < 0.0 ? -1 : +1;
  return g;
}

}  // namespace dssa
