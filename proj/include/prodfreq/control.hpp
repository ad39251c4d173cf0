#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prodfreq/ltitasks.hpp"
#include "prodfreq/time.hpp"

namespace prodfreq {

// Rational discrete-time system; coefficients in descending powers of z.
struct TransferFunction {
  std::vector<double> num;
  std::vector<double> den;
};

// ---- accuracy metric --------------------------------------------------------

// Time domain: A[n] = R_o * (1 - e^{-n/tau}) for n >= 0.
double accuracy_time(std::int64_t n, const MetricConfig& metric);

// Z domain, monic denominator:
//   G(z) = R_o (1-a) z / ((z-1)(z-a)),  a = e^{-1/tau}.
// tau = +inf collapses to the zero system; R_o = 0 likewise.
TransferFunction accuracy_tf(const MetricConfig& metric);

// Unity negative feedback around G: H(z) = 1 / (1 + G(z)). Returned in the
// e^{1/tau}-scaled form
//   num = [e^{1/t}, -(e^{1/t}+1), 1]
//   den = [e^{1/t}, (e^{1/t}-1) R_o - (e^{1/t}+1), 1]
// which makes num == den exactly when R_o = 0 (H = 1). The derivation from
// the step-shaped metric is spelled out in docs/closed-loop.md.
TransferFunction closed_loop_tf(const MetricConfig& metric);

// Step-update filter application: runs H as a direct-form difference equation
// over `input` with zero initial state.
std::vector<double> apply_filter(const TransferFunction& tf,
                                 std::span<const double> input);

// ---- pole/zero analysis -----------------------------------------------------

struct ResonanceInfo {
  double rad_per_sample = 0.0;
  double cycles_per_sample = 0.0;
  // Sampling-referred first replica, 1 + cycles_per_sample: the unit used by
  // the resonance row of the stability report (see docs/formats.md).
  double paper_hz = 0.0;
};

struct StabilityReport {
  std::vector<std::complex<double>> poles;
  std::vector<std::complex<double>> zeros;
  bool stable = false;  // strict: every pole magnitude < 1
  double max_pole_magnitude = 0.0;
  std::optional<ResonanceInfo> resonance;  // absent when response is flat
};

// Roots of a real polynomial, descending coefficients. Degree <= 2 uses the
// closed forms; higher degrees go through a balanced companion matrix. Each
// root is polished and checked against |p(r)| < 1e-9 * max|coef|.
std::vector<std::complex<double>> polynomial_roots(
    std::span<const double> coeffs);

// Pole/zero extraction plus stability flag and resonance search.
StabilityReport poles_zeros(const TransferFunction& tf);

// H(e^{j omega}); a frequency landing on a unit-circle pole yields +inf
// magnitude rather than an error.
std::complex<double> frequency_response(const TransferFunction& tf,
                                        double omega);

// argmax of |H(e^{j omega})| over (0, pi]: 4096-point coarse grid, then
// golden-section refinement to 1e-6 rad. nullopt when the response has no
// interior peak (monotone or flat).
std::optional<double> resonance_frequency(const TransferFunction& tf);

// ---- frequency units --------------------------------------------------------

enum class FreqUnit { CyclesPerSample, HzPaper, RequestsPerHour };

// hz_paper is numerically the events-per-sampling-period reading of a
// frequency, identical to cycles/sample; requests/hour scales by the sampling
// period. Bijective: round trips are exact up to rounding.
double unit_convert(double value, FreqUnit from, FreqUnit to, Duration ts);

}  // namespace prodfreq
