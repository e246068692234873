#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "levy/rng.hpp"
#include "levy/simd/kernels.hpp"

using namespace levy;

namespace {

struct BackendGuard {
  simd::Backend saved = simd::active_backend();
  ~BackendGuard() { simd::set_backend(saved); }
};

std::vector<double> random_values(std::size_t n, double lo, double hi, std::uint64_t seed) {
  Stream rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform01();
  return v;
}

}  // namespace

TEST_CASE("exp kernel matches std::exp to a few ulp") {
  BackendGuard guard;
  const auto xs = random_values(4096, -700.0, 690.0, 42);
  std::vector<double> out(xs.size());
  for (const auto backend : {simd::Backend::scalar, simd::best_backend()}) {
    REQUIRE(simd::set_backend(backend));
    simd::exp_scaled(xs.data(), out.data(), xs.size(), 1.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double ref = std::exp(xs[i]);
      CHECK(std::abs(out[i] - ref) <= 5e-15 * ref);
    }
  }
}

TEST_CASE("exp kernel edge behaviour") {
  BackendGuard guard;
  const double xs[] = {-1.0e9, -720.0, -708.5, 0.0, 709.0, 710.0, 1.0e9};
  double out[7];
  for (const auto backend : {simd::Backend::scalar, simd::best_backend()}) {
    REQUIRE(simd::set_backend(backend));
    simd::exp_scaled(xs, out, 7, 1.0);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 0.0);
    CHECK(out[3] == 1.0);
    CHECK(out[4] == doctest::Approx(std::exp(709.0)).epsilon(1e-13));
    CHECK(std::isinf(out[5]));
    CHECK(std::isinf(out[6]));
  }
}

TEST_CASE("scalar and simd backends agree bitwise") {
  if (simd::best_backend() == simd::Backend::scalar) return;  // nothing to compare
  BackendGuard guard;
  const auto z = random_values(1027, 0.0, 30.0, 7);
  const auto w = random_values(1027, -2.0, 2.0, 8);

  for (const double scale : {-2.0, -1.0, -0.37}) {
    REQUIRE(simd::set_backend(simd::Backend::scalar));
    const double s_ref = simd::sum_exp_weighted(z.data(), w.data(), z.size(), scale);
    std::vector<double> e_ref(z.size());
    simd::exp_scaled(z.data(), e_ref.data(), z.size(), scale);

    REQUIRE(simd::set_backend(simd::Backend::avx2));
    const double s_simd = simd::sum_exp_weighted(z.data(), w.data(), z.size(), scale);
    std::vector<double> e_simd(z.size());
    simd::exp_scaled(z.data(), e_simd.data(), z.size(), scale);

    CHECK(s_ref == s_simd);  // bit-identical by construction
    CHECK(e_ref == e_simd);
  }

  // prefix_min, including ties and short tails
  for (const std::size_t n : {0u, 1u, 3u, 4u, 5u, 127u, 1024u}) {
    const auto x = random_values(n, -5.0, 5.0, 100 + n);
    std::vector<double> a(n), b(n);
    REQUIRE(simd::set_backend(simd::Backend::scalar));
    simd::prefix_min(x.data(), a.data(), n);
    REQUIRE(simd::set_backend(simd::Backend::avx2));
    simd::prefix_min(x.data(), b.data(), n);
    CHECK(a == b);
  }
}

TEST_CASE("sum_exp_weighted equals a naive quadruple-precision-ish sum") {
  BackendGuard guard;
  REQUIRE(simd::set_backend(simd::Backend::scalar));
  const auto z = random_values(513, 0.0, 10.0, 11);
  const auto w = random_values(513, 0.0, 1.0, 12);
  const double got = simd::sum_exp_weighted(z.data(), w.data(), z.size(), -1.0);
  long double ref = 0.0L;
  for (std::size_t i = 0; i < z.size(); ++i)
    ref += static_cast<long double>(w[i]) * std::exp(static_cast<long double>(-z[i]));
  CHECK(static_cast<double>(ref) == doctest::Approx(got).epsilon(1e-13));
}

TEST_CASE("prefix_min is the running minimum") {
  BackendGuard guard;
  const auto x = random_values(301, -3.0, 3.0, 5);
  std::vector<double> out(x.size());
  simd::prefix_min(x.data(), out.data(), x.size());
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    m = std::min(m, x[i]);
    CHECK(out[i] == m);
  }
}
