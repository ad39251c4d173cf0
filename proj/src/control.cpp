#include "prodfreq/control.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "prodfreq/errors.hpp"

namespace prodfreq {

namespace {

void validate_metric(const MetricConfig& m) {
  if (!(m.tau > 0.0))
    throw Error(ErrorCode::ParameterError,
                "metric time constant tau must be positive");
  if (m.r_o < 0.0 || m.r_o > 1.0)
    throw Error(ErrorCode::ParameterError,
                "steady-state accuracy R_o must lie in [0, 1]");
}

}  // namespace

double accuracy_time(std::int64_t n, const MetricConfig& metric) {
  validate_metric(metric);
  if (n < 0) return 0.0;
  return metric.r_o * (1.0 - std::exp(-static_cast<double>(n) / metric.tau));
}

TransferFunction accuracy_tf(const MetricConfig& metric) {
  validate_metric(metric);
  const double a = std::isinf(metric.tau) ? 1.0 : std::exp(-1.0 / metric.tau);
  // G(z) = R_o (1-a) z / ((z-1)(z-a)); collapses to the zero system when
  // a -> 1 or R_o -> 0.
  return {{metric.r_o * (1.0 - a), 0.0}, {1.0, -(1.0 + a), a}};
}

TransferFunction closed_loop_tf(const MetricConfig& metric) {
  validate_metric(metric);
  const double e = std::isinf(metric.tau) ? 1.0 : std::exp(1.0 / metric.tau);
  return {{e, -(e + 1.0), 1.0},
          {e, (e - 1.0) * metric.r_o - (e + 1.0), 1.0}};
}

std::vector<double> apply_filter(const TransferFunction& tf,
                                 std::span<const double> input) {
  if (tf.den.empty() || tf.den[0] == 0.0)
    throw Error(ErrorCode::DegeneratePolynomial,
                "filter denominator has a zero leading coefficient");
  // The degenerate limits collapse to num == den; the identity system must be
  // exactly neutral, not neutral up to roundoff.
  if (tf.num == tf.den) return {input.begin(), input.end()};
  const double a0 = tf.den[0];
  // Descending-power coefficients; a numerator shorter than the denominator
  // right-aligns so the realization stays causal (z^-1 form).
  const std::size_t off =
      tf.den.size() > tf.num.size() ? tf.den.size() - tf.num.size() : 0;
  std::vector<double> out(input.size(), 0.0);
  for (std::size_t n = 0; n < input.size(); ++n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < tf.num.size(); ++i) {
      if (n < i + off) break;
      acc += tf.num[i] * input[n - i - off];
    }
    for (std::size_t i = 1; i < tf.den.size(); ++i) {
      if (n < i) break;
      acc -= tf.den[i] * out[n - i];
    }
    out[n] = acc / a0;
  }
  return out;
}

// ---- polynomial roots ------------------------------------------------------

namespace {

std::complex<double> eval_poly(std::span<const double> c,
                               std::complex<double> z) {
  std::complex<double> acc{0.0, 0.0};
  for (double ci : c) acc = acc * z + ci;
  return acc;
}

std::complex<double> eval_dpoly(std::span<const double> c,
                                std::complex<double> z) {
  std::complex<double> acc{0.0, 0.0};
  const auto deg = c.size() - 1;
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    acc = acc * z + static_cast<double>(deg - i) * c[i];
  return acc;
}

// Backward-error style residual: |p(r)| relative to sum |c_i| |r|^i.
// Coefficients are descending, so c[i] multiplies r^(deg - i).
double relative_residual(std::span<const double> c, std::complex<double> r) {
  const double rabs = std::abs(r);
  double scale = 0.0;
  double rpow = 1.0;
  for (std::size_t i = c.size(); i-- > 0;) {
    scale += std::abs(c[i]) * rpow;
    rpow *= rabs;
  }
  if (scale == 0.0) return 0.0;
  return std::abs(eval_poly(c, r)) / scale;
}

// Parlett-Reinsch style balancing to tighten eigenvalue conditioning.
void balance_in_place(Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  bool converged = false;
  while (!converged) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double row_norm = 0.0, col_norm = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        row_norm += std::abs(m(i, j));
        col_norm += std::abs(m(j, i));
      }
      if (row_norm == 0.0 || col_norm == 0.0) continue;
      double f = 1.0;
      const double s = row_norm + col_norm;
      while (col_norm < row_norm / 2.0) {
        col_norm *= 2.0;
        row_norm /= 2.0;
        f *= 2.0;
      }
      while (col_norm > row_norm * 2.0) {
        col_norm /= 2.0;
        row_norm *= 2.0;
        f /= 2.0;
      }
      if (col_norm + row_norm < 0.95 * s) {
        converged = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(
    std::span<const double> coeffs) {
  // Strip exact leading zeros.
  std::size_t lead = 0;
  while (lead < coeffs.size() && coeffs[lead] == 0.0) ++lead;
  if (lead == coeffs.size())
    throw Error(ErrorCode::DegeneratePolynomial,
                "zero polynomial has no well-defined roots");
  std::vector<double> c(coeffs.begin() + static_cast<std::ptrdiff_t>(lead),
                        coeffs.end());

  // Trailing zeros contribute exact roots at the origin. They are appended
  // after the polish pass: polishing them against the deflated polynomial
  // would walk them off zero.
  std::size_t origin_roots = 0;
  while (c.size() > 1 && c.back() == 0.0) {
    ++origin_roots;
    c.pop_back();
  }
  std::vector<std::complex<double>> roots;

  const std::size_t degree = c.size() - 1;
  if (degree == 1) {
    roots.emplace_back(-c[1] / c[0], 0.0);
  } else if (degree == 2) {
    const double a = c[0], b = c[1], cc = c[2];
    const double disc = b * b - 4.0 * a * cc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
      roots.emplace_back(q / a, 0.0);
      roots.emplace_back(q != 0.0 ? cc / q : 0.0, 0.0);
    } else {
      const double re = -b / (2.0 * a);
      const double im = std::sqrt(-disc) / (2.0 * a);
      roots.emplace_back(re, im);
      roots.emplace_back(re, -im);
    }
  } else if (degree >= 3) {
    const auto n = static_cast<Eigen::Index>(degree);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i)
      companion(i, n - 1) = -c[degree - static_cast<std::size_t>(i)] / c[0];
    balance_in_place(companion);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorCode::DomainError,
                  "eigenvalue iteration failed to converge");
    for (Eigen::Index i = 0; i < n; ++i)
      roots.push_back(solver.eigenvalues()(i));
  }

  // Newton polish, then the residual gate.
  for (auto& r : roots) {
    for (int it = 0; it < 2; ++it) {
      const std::complex<double> d = eval_dpoly(c, r);
      if (std::abs(d) < 1e-300) break;
      const std::complex<double> step = eval_poly(c, r) / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      r -= step;
    }
  }
  for (const auto& r : roots) {
    const double res = relative_residual(c, r);
    if (res > 1e-9)
      throw Error(ErrorCode::DomainError,
                  "root residual " + std::to_string(res) +
                      " exceeds the 1e-9 bound (ill-conditioned polynomial)");
  }
  for (std::size_t i = 0; i < origin_roots; ++i) roots.emplace_back(0.0, 0.0);

  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return roots;
}

std::complex<double> frequency_response(const TransferFunction& tf,
                                        double omega) {
  const std::complex<double> z{std::cos(omega), std::sin(omega)};
  const std::complex<double> den = eval_poly(tf.den, z);
  const std::complex<double> num = eval_poly(tf.num, z);
  if (std::abs(den) == 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, 0.0};
  }
  return num / den;
}

std::optional<double> resonance_frequency(const TransferFunction& tf) {
  constexpr int kGrid = 4096;
  const auto gain = [&](double w) {
    return std::abs(frequency_response(tf, w));
  };

  int best = 1;
  double best_gain = -1.0;
  for (int i = 1; i <= kGrid; ++i) {
    const double w = M_PI * static_cast<double>(i) / kGrid;
    const double g = gain(w);
    if (g > best_gain) {
      best_gain = g;
      best = i;
    }
  }
  if (!std::isfinite(best_gain)) {
    // A pole sits exactly on the unit circle; the grid point is the peak.
    return M_PI * static_cast<double>(best) / kGrid;
  }
  if (best == 1) return std::nullopt;  // monotone toward DC or flat
  if (best == kGrid) return M_PI;      // peak at the band edge

  // Golden-section refinement inside the bracketing grid cells.
  double a = M_PI * static_cast<double>(best - 1) / kGrid;
  double b = M_PI * static_cast<double>(best + 1) / kGrid;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = gain(x1), f2 = gain(x2);
  while (b - a > 1e-6) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = gain(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = gain(x1);
    }
  }
  return 0.5 * (a + b);
}

StabilityReport poles_zeros(const TransferFunction& tf) {
  bool den_nonzero = false;
  for (double d : tf.den) den_nonzero |= d != 0.0;
  if (!den_nonzero)
    throw Error(ErrorCode::DegeneratePolynomial,
                "transfer function denominator is the zero polynomial");

  StabilityReport report;
  if (tf.den.size() > 1) report.poles = polynomial_roots(tf.den);

  bool num_nonzero = false;
  for (double nv : tf.num) num_nonzero |= nv != 0.0;
  if (num_nonzero && tf.num.size() > 1) report.zeros = polynomial_roots(tf.num);

  report.max_pole_magnitude = 0.0;
  for (const auto& p : report.poles)
    report.max_pole_magnitude = std::max(report.max_pole_magnitude, std::abs(p));
  report.stable = report.max_pole_magnitude < 1.0;

  if (const auto w = resonance_frequency(tf)) {
    ResonanceInfo info;
    info.rad_per_sample = *w;
    info.cycles_per_sample = *w / (2.0 * M_PI);
    info.paper_hz = 1.0 + info.cycles_per_sample;
    report.resonance = info;
  }
  return report;
}

double unit_convert(double value, FreqUnit from, FreqUnit to, Duration ts) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw Error(ErrorCode::DomainError,
                "frequencies are nonnegative finite values");
  const bool needs_ts =
      from == FreqUnit::RequestsPerHour || to == FreqUnit::RequestsPerHour;
  const double ts_seconds = static_cast<double>(ts.count()) / 1000.0;
  if (needs_ts && ts_seconds <= 0.0)
    throw Error(ErrorCode::UnitError,
                "a positive sampling period is required for requests/hour");

  // Normalize through cycles/sample (== events per sampling period).
  double cycles = value;
  if (from == FreqUnit::RequestsPerHour) cycles = value * ts_seconds / 3600.0;
  double out = cycles;
  if (to == FreqUnit::RequestsPerHour) out = cycles * 3600.0 / ts_seconds;
  return out;
}

}  // namespace prodfreq
