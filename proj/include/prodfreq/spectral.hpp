#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "prodfreq/signal.hpp"

namespace prodfreq {

enum class Window { Rect, Hann };

// One-sided magnitude spectrum of the mean-removed signal. Magnitudes are raw
// |X[k]| of the N-point DFT; frequencies are k/N cycles/sample for
// k = 0..floor(N/2).
struct SpectrumSummary {
  std::vector<double> frequencies;
  std::vector<double> magnitudes;
  double f_m = 0.0;  // spectral centroid, DC excluded
  double f_0 = 0.0;  // largest non-DC peak; ties resolve to the lowest bin
  std::size_t n_samples = 0;
  bool empty = false;  // all-zero input
};

// Requires at least 4 samples. All-zero signals come back flagged empty with
// f_m = f_0 = 0.
SpectrumSummary spectrum(const ProductionSignal& sig,
                         Window window = Window::Hann);

// Relative shift (f_after - f_before) / f_before; f_before == 0 -> DomainError.
double kappa(double f_before, double f_after);

struct ComparisonRow {
  std::string path;
  double f_m_before = 0.0;
  double f_m_after = 0.0;
  double f_0_before = 0.0;
  double f_0_after = 0.0;
  double kappa_m = 0.0;
  double kappa_0 = 0.0;
  bool filtered = false;  // manual-task-exclusion variant
};

// Pairs per-path summaries of two logs. `pairing` maps before-path name to
// after-path name; names missing on either side -> PairingError. When the
// filtered maps are supplied their rows are appended with filtered = true.
std::vector<ComparisonRow> compare_logs(
    const std::map<std::string, SpectrumSummary>& before,
    const std::map<std::string, SpectrumSummary>& after,
    const std::map<std::string, std::string>& pairing,
    const std::map<std::string, SpectrumSummary>* filtered_before = nullptr,
    const std::map<std::string, SpectrumSummary>* filtered_after = nullptr);

// ---- transforms -------------------------------------------------------------

// In-place radix-2 FFT; size must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& data, bool inverse = false);

// DFT of arbitrary length (Bluestein when n is not a power of two).
std::vector<std::complex<double>> dft(std::span<const double> input);

}  // namespace prodfreq
