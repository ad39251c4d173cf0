#include "prodfreq/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "prodfreq/log.hpp"

namespace prodfreq::kernels {

// ---- scalar reference ------------------------------------------------------
// The vector backends replicate these operation sequences element for element;
// the project is compiled with -ffp-contract=off so the comparison is exact.

namespace scalar {

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void sub_scalar(const double* a, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - c;
}

void magnitude(const double* re, const double* im, double* out,
               std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void initial_step(const double* l, const double* k, const std::uint8_t* open,
                  double c_gate, double alpha, double* out, std::size_t n) {
  const double beta = 1.0 - alpha;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = c_gate + beta * l[i] + alpha * k[i];
    out[i] = open[i] ? t : 0.0;
  }
}

void nonauto_step(const double* l, const double* k, const double* yi,
                  const std::uint8_t* open, double c_gate, double alpha,
                  double* out, std::size_t n) {
  const double beta = 1.0 - alpha;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (c_gate + beta * l[i] + alpha * k[i] + yi[i]) * 0.5;
    out[i] = open[i] ? t : yi[i];
  }
}

void am_select(const double* base, const double* carrier, const double* yi,
               const std::uint8_t* open, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = open[i] ? base[i] * carrier[i] : yi[i];
}

}  // namespace scalar

static const Ops kScalarOps = {
    "scalar",       scalar::mul,          scalar::sub_scalar,
    scalar::magnitude, scalar::sum,       scalar::dot,
    scalar::initial_step, scalar::nonauto_step, scalar::am_select,
};

const Ops& scalar_ops() { return kScalarOps; }

// ---- dispatch --------------------------------------------------------------

#if defined(PRODFREQ_HAVE_AVX2)
const Ops& avx2_ops();  // defined in kernels_avx2.cpp
bool avx2_supported() { return __builtin_cpu_supports("avx2"); }
#else
bool avx2_supported() { return false; }
#endif

namespace {

const Ops* g_active = nullptr;

const Ops* pick_default() {
#if defined(PRODFREQ_HAVE_AVX2)
  if (avx2_supported()) return &avx2_ops();
#endif
  return &kScalarOps;
}

const Ops* resolve(std::string_view name) {
  if (name == "scalar") return &kScalarOps;
#if defined(PRODFREQ_HAVE_AVX2)
  if (name == "avx2" && avx2_supported()) return &avx2_ops();
#endif
  return nullptr;
}

void init_once() {
  if (g_active) return;
  if (const char* env = std::getenv("PRODFREQ_KERNELS")) {
    if (const Ops* forced = resolve(env)) {
      g_active = forced;
      log_debug(std::string("kernel backend forced to ") + forced->name);
      return;
    }
    log_warn(std::string("PRODFREQ_KERNELS=") + env +
             " unavailable, falling back to auto selection");
  }
  g_active = pick_default();
  log_debug(std::string("kernel backend: ") + g_active->name);
}

}  // namespace

const Ops& active() {
  init_once();
  return *g_active;
}

bool select(std::string_view name) {
  if (const Ops* ops = resolve(name)) {
    g_active = ops;
    return true;
  }
  return false;
}

std::vector<std::string> available() {
  std::vector<std::string> out{"scalar"};
  if (avx2_supported()) out.emplace_back("avx2");
  return out;
}

}  // namespace prodfreq::kernels
