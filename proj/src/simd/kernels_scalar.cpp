#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "exp_core.hpp"

// Scalar reference backend. The 4-lane accumulation mirrors the AVX2 register
// layout (lane j holds elements 4k+j) so both backends sum in the same order.

namespace levy::simd::detail {

double exp_scalar_one(double x) {
  if (x < kExpLo) return 0.0;
  if (x > kExpHi) return std::numeric_limits<double>::infinity();
  const double n = std::nearbyint(x * kLog2E);
  double r = std::fma(n, -kLn2Hi, x);
  r = std::fma(n, -kLn2Lo, r);
  double p = kExpPoly[0];
  for (int k = 1; k < 14; ++k) p = std::fma(p, r, kExpPoly[k]);
  return ldexp_fast(p, static_cast<std::int64_t>(n));
}

double sum_exp_weighted_scalar(const double* z, const double* w, std::size_t n,
                               double scale) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] = std::fma(w[i], exp_scalar_one(scale * z[i]), acc[0]);
    acc[1] = std::fma(w[i + 1], exp_scalar_one(scale * z[i + 1]), acc[1]);
    acc[2] = std::fma(w[i + 2], exp_scalar_one(scale * z[i + 2]), acc[2]);
    acc[3] = std::fma(w[i + 3], exp_scalar_one(scale * z[i + 3]), acc[3]);
  }
  for (std::size_t i = n4; i < n; ++i)
    acc[i - n4] = std::fma(w[i], exp_scalar_one(scale * z[i]), acc[i - n4]);
  return ((acc[0] + acc[1]) + (acc[2] + acc[3]));
}

void exp_scaled_scalar(const double* z, double* out, std::size_t n, double scale) {
  for (std::size_t i = 0; i < n; ++i) out[i] = exp_scalar_one(scale * z[i]);
}

void prefix_min_scalar(const double* x, double* out, std::size_t n) {
  if (n == 0) return;
  double m = x[0];
  out[0] = m;
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] < m) m = x[i];
    out[i] = m;
  }
}

}  // namespace levy::simd::detail
