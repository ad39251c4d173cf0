#pragma once

// Independent reference implementations used to check the library. These are
// deliberately naive (brute-force sums, grid searches, long division) and
// share no code with src/.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;

// O(N^2) DFT, textbook sum.
inline std::vector<std::complex<double>> brute_dft(
    std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double ang =
          -2.0 * kPi * static_cast<double>(k) * static_cast<double>(i) /
          static_cast<double>(n);
      acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

// One-sided magnitudes of the mean-removed signal, rectangular window.
inline std::vector<double> brute_one_sided(std::span<const double> x) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centred(x.begin(), x.end());
  for (double& v : centred) v -= mean;
  const auto spectrum = brute_dft(centred);
  std::vector<double> mags(n / 2 + 1);
  for (std::size_t k = 0; k < mags.size(); ++k)
    mags[k] = std::abs(spectrum[k]);
  return mags;
}

// Spectral centroid over non-DC one-sided bins, matching the f_m definition.
inline double brute_centroid(std::span<const double> x) {
  const auto mags = brute_one_sided(x);
  const std::size_t n = x.size();
  double num = 0.0, den = 0.0;
  for (std::size_t k = 1; k < mags.size(); ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(n);
    num += f * mags[k];
    den += mags[k];
  }
  return den > 0.0 ? num / den : 0.0;
}

// Exhaustive search for the 2-parameter production fit, minimizing the sum of
// squared errors of y - (ln_A + (1-alpha)l + alpha k). Three refinement
// rounds give ~1e-6 resolution.
struct GridFit {
  double ln_A = 0.0;
  double alpha = 0.0;
};

inline GridFit grid_fit(std::span<const double> y, std::span<const double> l,
                        std::span<const double> k) {
  auto sse = [&](double lnA, double alpha) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double r = y[i] - (lnA + (1.0 - alpha) * l[i] + alpha * k[i]);
      acc += r * r;
    }
    return acc;
  };
  double best_a = 0.0, best_c = 0.0, best = 1e300;
  double c_lo = -10.0, c_hi = 10.0, a_lo = -1.0, a_hi = 2.0;
  for (int round = 0; round < 4; ++round) {
    const int steps = 100;
    double round_a = best_a, round_c = best_c;
    for (int ia = 0; ia <= steps; ++ia) {
      const double alpha =
          a_lo + (a_hi - a_lo) * static_cast<double>(ia) / steps;
      for (int ic = 0; ic <= steps; ++ic) {
        const double lnA =
            c_lo + (c_hi - c_lo) * static_cast<double>(ic) / steps;
        const double v = sse(lnA, alpha);
        if (v < best) {
          best = v;
          round_a = alpha;
          round_c = lnA;
        }
      }
    }
    best_a = round_a;
    best_c = round_c;
    const double a_span = (a_hi - a_lo) / steps * 4.0;
    const double c_span = (c_hi - c_lo) / steps * 4.0;
    a_lo = best_a - a_span;
    a_hi = best_a + a_span;
    c_lo = best_c - c_span;
    c_hi = best_c + c_span;
  }
  return {best_c, best_a};
}

// Root magnitudes of the monic quadratic z^2 + b z + c with real b, c.
inline std::pair<double, double> quadratic_root_magnitudes(double b,
                                                           double c) {
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) {
    const double m = std::sqrt(c);  // |conjugate pair| = sqrt(product)
    return {m, m};
  }
  const double s = std::sqrt(disc);
  const double r1 = (-b + s) / 2.0;
  const double r2 = (-b - s) / 2.0;
  return {std::abs(r1), std::abs(r2)};
}

// First n coefficients of num/den as a power series in z^-1 (polynomial long
// division). Coefficients are the system's impulse response.
inline std::vector<double> series_coefficients(std::span<const double> num,
                                               std::span<const double> den,
                                               std::size_t n) {
  // Align numerator to the denominator degree: h[k] multiplies z^-k.
  const std::size_t d = den.size();
  std::vector<double> padded(d, 0.0);
  for (std::size_t i = 0; i < num.size(); ++i)
    padded[d - num.size() + i] = num[i];
  std::vector<double> h(n, 0.0);
  std::vector<double> rem = padded;  // remainder, descending powers
  for (std::size_t k = 0; k < n; ++k) {
    h[k] = rem[0] / den[0];
    for (std::size_t i = 0; i < d; ++i) rem[i] -= h[k] * den[i];
    // shift left one power of z
    for (std::size_t i = 0; i + 1 < d; ++i) rem[i] = rem[i + 1];
    rem[d - 1] = 0.0;
  }
  return h;
}

// Direct evaluation of the rational response at e^{j omega} via plain power
// sums (no Horner, unlike the library).
inline std::complex<double> response_at(std::span<const double> num,
                                        std::span<const double> den,
                                        double omega) {
  const std::complex<double> z = std::polar(1.0, omega);
  std::complex<double> top{0.0, 0.0}, bottom{0.0, 0.0};
  const auto eval = [&](std::span<const double> c) {
    std::complex<double> acc{0.0, 0.0};
    const int deg = static_cast<int>(c.size()) - 1;
    for (std::size_t i = 0; i < c.size(); ++i)
      acc += c[i] * std::pow(z, deg - static_cast<int>(i));
    return acc;
  };
  top = eval(num);
  bottom = eval(den);
  return top / bottom;
}

// Dense-grid argmax of |H| over (0, pi].
inline double grid_resonance(std::span<const double> num,
                             std::span<const double> den,
                             std::size_t points = 100'000) {
  double best_w = 0.0, best = -1.0;
  for (std::size_t i = 1; i <= points; ++i) {
    const double w = kPi * static_cast<double>(i) / static_cast<double>(points);
    const double m = std::abs(response_at(num, den, w));
    if (m > best) {
      best = m;
      best_w = w;
    }
  }
  return best_w;
}

// Fold a frequency in cycles/sample into the principal band [0, 0.5].
inline double fold_cycles(double f) {
  double m = std::fmod(f, 1.0);
  if (m < 0.0) m += 1.0;
  return m > 0.5 ? 1.0 - m : m;
}

}  // namespace oracles
