#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Data-parallel inner loops used by the fitting, task-evaluation and spectral
// code. Every operation has a scalar reference implementation and may have
// vector variants; the active backend is chosen once at startup from CPU
// capabilities and can be overridden with PRODFREQ_KERNELS=scalar|avx2.
//
// Contract for equivalence: elementwise kernels (mul, sub_scalar, magnitude,
// *_step, am_select) perform the same per-element operation sequence as the
// scalar reference and are expected to match it bit for bit when the project
// is built with contraction disabled. Reductions (sum, dot) may associate
// differently and are only guaranteed to agree within rounding noise.

namespace prodfreq::kernels {

struct Ops {
  const char* name;

  // out[i] = a[i] * b[i]
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);

  // out[i] = a[i] - c
  void (*sub_scalar)(const double* a, double c, double* out, std::size_t n);

  // out[i] = sqrt(re[i]*re[i] + im[i]*im[i])
  void (*magnitude)(const double* re, const double* im, double* out,
                    std::size_t n);

  double (*sum)(const double* a, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);

  // out[i] = open[i] ? C + (1-alpha)*l[i] + alpha*k[i] : 0
  void (*initial_step)(const double* l, const double* k,
                       const std::uint8_t* open, double c_gate, double alpha,
                       double* out, std::size_t n);

  // out[i] = open[i] ? 0.5*(C + (1-alpha)*l[i] + alpha*k[i] + yi[i]) : yi[i]
  void (*nonauto_step)(const double* l, const double* k, const double* yi,
                       const std::uint8_t* open, double c_gate, double alpha,
                       double* out, std::size_t n);

  // out[i] = open[i] ? base[i]*carrier[i] : yi[i]
  void (*am_select)(const double* base, const double* carrier,
                    const double* yi, const std::uint8_t* open, double* out,
                    std::size_t n);
};

// Backend active for this process (auto-selected, env-overridable).
const Ops& active();

// Force a backend by name; returns false if unavailable on this machine.
bool select(std::string_view name);

std::vector<std::string> available();

// Always-present reference implementation, independent of selection.
const Ops& scalar_ops();

}  // namespace prodfreq::kernels
