#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "prodfreq/kernels.hpp"

using prodfreq::kernels::Ops;

namespace {

struct Arrays {
  std::vector<double> a, b, c, d;
  std::vector<std::uint8_t> open;
};

Arrays random_arrays(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  std::bernoulli_distribution gate(0.7);
  Arrays r;
  r.a.resize(n);
  r.b.resize(n);
  r.c.resize(n);
  r.d.resize(n);
  r.open.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.a[i] = dist(rng);
    r.b[i] = dist(rng);
    r.c[i] = dist(rng);
    r.d[i] = dist(rng);
    r.open[i] = gate(rng) ? 1 : 0;
  }
  return r;
}

bool bit_equal(const std::vector<double>& x, const std::vector<double>& y) {
  return x.size() == y.size() &&
         (x.empty() ||
          std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
}

}  // namespace

TEST_CASE("scalar reference semantics") {
  const Ops& ops = prodfreq::kernels::scalar_ops();
  const Arrays r = random_arrays(33, 7);
  const std::size_t n = r.a.size();

  std::vector<double> out(n);
  ops.mul(r.a.data(), r.b.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == r.a[i] * r.b[i]);

  ops.sub_scalar(r.a.data(), 1.5, out.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == r.a[i] - 1.5);

  ops.magnitude(r.a.data(), r.b.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(out[i] ==
          doctest::Approx(std::hypot(r.a[i], r.b[i])).epsilon(1e-15));

  double s = 0.0;
  for (double v : r.a) s += v;
  CHECK(ops.sum(r.a.data(), n) == doctest::Approx(s).epsilon(1e-12));

  double dp = 0.0;
  for (std::size_t i = 0; i < n; ++i) dp += r.a[i] * r.b[i];
  CHECK(ops.dot(r.a.data(), r.b.data(), n) ==
        doctest::Approx(dp).epsilon(1e-12));

  ops.initial_step(r.a.data(), r.b.data(), r.open.data(), 0.4, 0.3, out.data(),
                   n);
  for (std::size_t i = 0; i < n; ++i) {
    const double want =
        r.open[i] ? 0.4 + 0.7 * r.a[i] + 0.3 * r.b[i] : 0.0;
    CHECK(out[i] == doctest::Approx(want).epsilon(1e-15));
  }

  ops.nonauto_step(r.a.data(), r.b.data(), r.c.data(), r.open.data(), 0.4, 0.3,
                   out.data(), n);
  for (std::size_t i = 0; i < n; ++i) {
    const double want =
        r.open[i] ? 0.5 * (0.4 + 0.7 * r.a[i] + 0.3 * r.b[i] + r.c[i])
                  : r.c[i];
    CHECK(out[i] == doctest::Approx(want).epsilon(1e-15));
  }

  ops.am_select(r.a.data(), r.b.data(), r.c.data(), r.open.data(), out.data(),
                n);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(out[i] == (r.open[i] ? r.a[i] * r.b[i] : r.c[i]));
}

TEST_CASE("backend registry") {
  const auto names = prodfreq::kernels::available();
  CHECK(!names.empty());
  CHECK(names.front() == "scalar");
  CHECK(prodfreq::kernels::select("scalar"));
  CHECK(std::string(prodfreq::kernels::active().name) == "scalar");
  CHECK_FALSE(prodfreq::kernels::select("no-such-backend"));

  bool found_active = false;
  for (const auto& n : names) {
    CHECK(prodfreq::kernels::select(n));
    if (n == prodfreq::kernels::active().name) found_active = true;
  }
  CHECK(found_active);
  prodfreq::kernels::select("scalar");
}

TEST_CASE("vector variants match the scalar reference") {
  const Ops& scalar = prodfreq::kernels::scalar_ops();
  for (const auto& name : prodfreq::kernels::available()) {
    if (name == "scalar") continue;
    REQUIRE(prodfreq::kernels::select(name));
    const Ops& vec = prodfreq::kernels::active();
    INFO("backend ", name);

    // Odd lengths exercise the tail path; 0 and 1 the degenerate ones.
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3},
                          std::size_t{4}, std::size_t{7}, std::size_t{64},
                          std::size_t{67}, std::size_t{1000},
                          std::size_t{1021}}) {
      const Arrays r = random_arrays(n, 1234 + n);
      std::vector<double> want(n), got(n);

      scalar.mul(r.a.data(), r.b.data(), want.data(), n);
      vec.mul(r.a.data(), r.b.data(), got.data(), n);
      CHECK(bit_equal(want, got));

      scalar.sub_scalar(r.a.data(), 0.77, want.data(), n);
      vec.sub_scalar(r.a.data(), 0.77, got.data(), n);
      CHECK(bit_equal(want, got));

      scalar.magnitude(r.a.data(), r.b.data(), want.data(), n);
      vec.magnitude(r.a.data(), r.b.data(), got.data(), n);
      CHECK(bit_equal(want, got));

      scalar.initial_step(r.a.data(), r.b.data(), r.open.data(), -0.18, 0.02,
                          want.data(), n);
      vec.initial_step(r.a.data(), r.b.data(), r.open.data(), -0.18, 0.02,
                       got.data(), n);
      CHECK(bit_equal(want, got));

      scalar.nonauto_step(r.a.data(), r.b.data(), r.c.data(), r.open.data(),
                          -0.18, 0.02, want.data(), n);
      vec.nonauto_step(r.a.data(), r.b.data(), r.c.data(), r.open.data(),
                       -0.18, 0.02, got.data(), n);
      CHECK(bit_equal(want, got));

      scalar.am_select(r.a.data(), r.b.data(), r.c.data(), r.open.data(),
                       want.data(), n);
      vec.am_select(r.a.data(), r.b.data(), r.c.data(), r.open.data(),
                    got.data(), n);
      CHECK(bit_equal(want, got));

      // Reductions may reassociate; allow rounding noise only.
      const double s0 = scalar.sum(r.a.data(), n);
      const double s1 = vec.sum(r.a.data(), n);
      CHECK(std::abs(s0 - s1) <= 1e-12 * (1.0 + std::abs(s0)));
      const double d0 = scalar.dot(r.a.data(), r.b.data(), n);
      const double d1 = vec.dot(r.a.data(), r.b.data(), n);
      CHECK(std::abs(d0 - d1) <= 1e-12 * (1.0 + std::abs(d0)));
    }
  }
  prodfreq::kernels::select("scalar");
}
