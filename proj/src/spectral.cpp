#include "prodfreq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prodfreq/errors.hpp"
#include "prodfreq/kernels.hpp"

namespace prodfreq {

// ---- transforms ------------------------------------------------------------

void fft_pow2(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0) return;
  if ((n & (n - 1)) != 0)
    throw Error(ErrorCode::ParameterError, "fft_pow2 requires a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wlen{std::cos(ang), std::sin(ang)};
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w{1.0, 0.0};
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = data[i + j];
        const std::complex<double> v = data[i + j + len / 2] * w;
        data[i + j] = u + v;
        data[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& x : data) x /= static_cast<double>(n);
}

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Bluestein chirp-z: arbitrary-length DFT through three power-of-two FFTs.
std::vector<std::complex<double>> dft_bluestein(std::span<const double> x) {
  const std::size_t n = x.size();
  const auto mod = static_cast<std::int64_t>(2 * n);
  const auto chirp = [&](std::size_t i) {
    const auto m =
        static_cast<std::int64_t>((static_cast<unsigned long long>(i) * i) %
                                  static_cast<unsigned long long>(mod));
    const double ang = -M_PI * static_cast<double>(m) / static_cast<double>(n);
    return std::complex<double>{std::cos(ang), std::sin(ang)};
  };

  const std::size_t m = next_pow2(2 * n - 1);
  std::vector<std::complex<double>> a(m, {0.0, 0.0});
  std::vector<std::complex<double>> b(m, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) a[i] = x[i] * chirp(i);
  b[0] = std::conj(chirp(0));
  for (std::size_t i = 1; i < n; ++i) {
    const std::complex<double> c = std::conj(chirp(i));
    b[i] = c;
    b[m - i] = c;
  }
  fft_pow2(a);
  fft_pow2(b);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  fft_pow2(a, true);

  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp(k);
  return out;
}

}  // namespace

std::vector<std::complex<double>> dft(std::span<const double> input) {
  const std::size_t n = input.size();
  if (n == 0) return {};
  if ((n & (n - 1)) == 0) {
    std::vector<std::complex<double>> data(n);
    for (std::size_t i = 0; i < n; ++i) data[i] = {input[i], 0.0};
    fft_pow2(data);
    return data;
  }
  return dft_bluestein(input);
}

// ---- spectrum summary ------------------------------------------------------

SpectrumSummary spectrum(const ProductionSignal& sig, Window window) {
  const std::size_t n = sig.size();
  if (n < 4)
    throw Error(ErrorCode::InsufficientData,
                "spectrum needs at least 4 samples, have " +
                    std::to_string(n));

  const auto& ops = kernels::active();
  SpectrumSummary out;
  out.n_samples = n;

  bool all_zero = true;
  for (double v : sig.values) all_zero &= v == 0.0;
  out.empty = all_zero;

  // Mean removal, then the analysis window. A constant signal is analytically
  // zero after mean removal; force that so summation roundoff cannot leave a
  // phantom line behind.
  bool all_equal = true;
  for (double v : sig.values) all_equal &= v == sig.values[0];
  std::vector<double> x(n);
  const double mean = ops.sum(sig.values.data(), n) / static_cast<double>(n);
  ops.sub_scalar(sig.values.data(), mean, x.data(), n);
  if (all_equal) std::fill(x.begin(), x.end(), 0.0);
  if (window == Window::Hann) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
      w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) /
                                   static_cast<double>(n - 1)));
    ops.mul(x.data(), w.data(), x.data(), n);
  }

  const std::vector<std::complex<double>> bins = dft(x);
  const std::size_t half = n / 2;
  out.frequencies.resize(half + 1);
  out.magnitudes.resize(half + 1);
  std::vector<double> re(half + 1), im(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    out.frequencies[k] = static_cast<double>(k) / static_cast<double>(n);
    re[k] = bins[k].real();
    im[k] = bins[k].imag();
  }
  ops.magnitude(re.data(), im.data(), out.magnitudes.data(), half + 1);

  // Centroid and dominant line over the non-DC bins.
  const double denom = ops.sum(out.magnitudes.data() + 1, half);
  if (denom > 0.0) {
    out.f_m = ops.dot(out.frequencies.data() + 1, out.magnitudes.data() + 1,
                      half) /
              denom;
    double peak = 0.0;
    for (std::size_t k = 1; k <= half; ++k)
      peak = std::max(peak, out.magnitudes[k]);
    for (std::size_t k = 1; k <= half; ++k) {
      if (out.magnitudes[k] >= peak * (1.0 - 1e-9)) {
        out.f_0 = out.frequencies[k];
        break;
      }
    }
  } else {
    out.f_m = 0.0;
    out.f_0 = 0.0;
    out.empty = true;
  }
  return out;
}

double kappa(double f_before, double f_after) {
  if (f_before == 0.0)
    throw Error(ErrorCode::DomainError,
                "kappa undefined for a zero reference frequency");
  return (f_after - f_before) / f_before;
}

std::vector<ComparisonRow> compare_logs(
    const std::map<std::string, SpectrumSummary>& before,
    const std::map<std::string, SpectrumSummary>& after,
    const std::map<std::string, std::string>& pairing,
    const std::map<std::string, SpectrumSummary>* filtered_before,
    const std::map<std::string, SpectrumSummary>* filtered_after) {
  std::vector<ComparisonRow> rows;
  const auto build = [](const std::string& name, const SpectrumSummary& b,
                        const SpectrumSummary& a, bool filtered) {
    ComparisonRow row;
    row.path = name;
    row.f_m_before = b.f_m;
    row.f_m_after = a.f_m;
    row.f_0_before = b.f_0;
    row.f_0_after = a.f_0;
    row.kappa_m = kappa(b.f_m, a.f_m);
    row.kappa_0 = kappa(b.f_0, a.f_0);
    row.filtered = filtered;
    return row;
  };

  for (const auto& [bname, aname] : pairing) {
    const auto bit = before.find(bname);
    if (bit == before.end())
      throw Error(ErrorCode::PairingError,
                  "pairing names unknown before-path: " + bname);
    const auto ait = after.find(aname);
    if (ait == after.end())
      throw Error(ErrorCode::PairingError,
                  "pairing names unknown after-path: " + aname);
    rows.push_back(build(bname, bit->second, ait->second, false));
  }
  if (filtered_before && filtered_after) {
    for (const auto& [bname, aname] : pairing) {
      const auto bit = filtered_before->find(bname);
      const auto ait = filtered_after->find(aname);
      // Filtering may legitimately empty a path; those rows are dropped.
      if (bit == filtered_before->end() || ait == filtered_after->end())
        continue;
      rows.push_back(build(bname, bit->second, ait->second, true));
    }
  }
  return rows;
}

}  // namespace prodfreq
