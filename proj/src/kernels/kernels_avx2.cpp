// AVX2 variants of the data-parallel kernels. Same per-element operation
// order as the scalar reference (plain mul/add, no fused contraction), so
// elementwise results are bit-identical; reductions use striped lanes and a
// final horizontal fold.

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "prodfreq/kernels.hpp"

namespace prodfreq::kernels {
namespace avx2 {
namespace {

// Expands four gate bytes to a 4x64-bit blend mask.
inline __m256d mask4(const std::uint8_t* g) {
  int packed;
  std::memcpy(&packed, g, 4);
  const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
  return _mm256_castsi256_pd(
      _mm256_cmpgt_epi64(wide, _mm256_setzero_si256()));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void sub_scalar(const double* a, double c, double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), vc));
  for (; i < n; ++i) out[i] = a[i] - c;
}

void magnitude(const double* re, const double* im, double* out,
               std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    const __m256d s =
        _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
  }
  for (; i < n; ++i) out[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double total = hsum(acc);
  for (; i < n; ++i) total += a[i];
  return total;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double total = hsum(acc);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void initial_step(const double* l, const double* k, const std::uint8_t* open,
                  double c_gate, double alpha, double* out, std::size_t n) {
  const double beta = 1.0 - alpha;
  const __m256d vc = _mm256_set1_pd(c_gate);
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_add_pd(vc, _mm256_mul_pd(vb, _mm256_loadu_pd(l + i)));
    t = _mm256_add_pd(t, _mm256_mul_pd(va, _mm256_loadu_pd(k + i)));
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(zero, t, mask4(open + i)));
  }
  for (; i < n; ++i) {
    const double t = c_gate + beta * l[i] + alpha * k[i];
    out[i] = open[i] ? t : 0.0;
  }
}

void nonauto_step(const double* l, const double* k, const double* yi,
                  const std::uint8_t* open, double c_gate, double alpha,
                  double* out, std::size_t n) {
  const double beta = 1.0 - alpha;
  const __m256d vc = _mm256_set1_pd(c_gate);
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(yi + i);
    __m256d t = _mm256_add_pd(vc, _mm256_mul_pd(vb, _mm256_loadu_pd(l + i)));
    t = _mm256_add_pd(t, _mm256_mul_pd(va, _mm256_loadu_pd(k + i)));
    t = _mm256_mul_pd(_mm256_add_pd(t, vy), half);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(vy, t, mask4(open + i)));
  }
  for (; i < n; ++i) {
    const double t = (c_gate + beta * l[i] + alpha * k[i] + yi[i]) * 0.5;
    out[i] = open[i] ? t : yi[i];
  }
}

void am_select(const double* base, const double* carrier, const double* yi,
               const std::uint8_t* open, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(base + i),
                                       _mm256_loadu_pd(carrier + i));
    _mm256_storeu_pd(
        out + i,
        _mm256_blendv_pd(_mm256_loadu_pd(yi + i), prod, mask4(open + i)));
  }
  for (; i < n; ++i) out[i] = open[i] ? base[i] * carrier[i] : yi[i];
}

}  // namespace avx2

static const Ops kAvx2Ops = {
    "avx2",         avx2::mul,          avx2::sub_scalar,
    avx2::magnitude, avx2::sum,         avx2::dot,
    avx2::initial_step, avx2::nonauto_step, avx2::am_select,
};

const Ops& avx2_ops() { return kAvx2Ops; }

}  // namespace prodfreq::kernels
