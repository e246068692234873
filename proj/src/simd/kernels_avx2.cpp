#include <immintrin.h>

#include <cstddef>
#include <cstdint>
#include <limits>

#include "exp_core.hpp"

namespace levy::simd::detail {

double exp_scalar_one(double x);  // kernels_scalar.cpp; used for tails

namespace {

// Same operation sequence as exp_scalar_one, four lanes at a time.
inline __m256d exp4(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(kLog2E);
  const __m256d nln2hi = _mm256_set1_pd(-kLn2Hi);
  const __m256d nln2lo = _mm256_set1_pd(-kLn2Lo);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fmadd_pd(n, nln2hi, x);
  r = _mm256_fmadd_pd(n, nln2lo, r);

  __m256d p = _mm256_set1_pd(kExpPoly[0]);
  for (int k = 1; k < 14; ++k)
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpPoly[k]));

  // 2^n by exponent-field construction (n fits in int32 on the clamped domain)
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  const __m256d scale = _mm256_castsi256_pd(bits);
  __m256d res = _mm256_mul_pd(p, scale);

  const __m256d lo = _mm256_set1_pd(kExpLo);
  const __m256d hi = _mm256_set1_pd(kExpHi);
  res = _mm256_blendv_pd(res, _mm256_setzero_pd(), _mm256_cmp_pd(x, lo, _CMP_LT_OQ));
  res = _mm256_blendv_pd(res, _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                         _mm256_cmp_pd(x, hi, _CMP_GT_OQ));
  return res;
}

}  // namespace

double sum_exp_weighted_avx2(const double* z, const double* w, std::size_t n,
                             double scale) {
  const __m256d s = _mm256_set1_pd(scale);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d e = exp4(_mm256_mul_pd(s, _mm256_loadu_pd(z + i)));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), e, acc);
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = n4; i < n; ++i)
    lane[i - n4] = __builtin_fma(w[i], exp_scalar_one(scale * z[i]), lane[i - n4]);
  return ((lane[0] + lane[1]) + (lane[2] + lane[3]));
}

void exp_scaled_avx2(const double* z, double* out, std::size_t n, double scale) {
  const __m256d s = _mm256_set1_pd(scale);
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4)
    _mm256_storeu_pd(out + i, exp4(_mm256_mul_pd(s, _mm256_loadu_pd(z + i))));
  for (std::size_t i = n4; i < n; ++i) out[i] = exp_scalar_one(scale * z[i]);
}

void prefix_min_avx2(const double* x, double* out, std::size_t n) {
  if (n == 0) return;
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d carry = inf;
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    // in-register prefix min: shift by 1 lane, then by 2
    __m256d s1 = _mm256_blend_pd(_mm256_permute4x64_pd(v, 0x90), inf, 0x1);
    v = _mm256_min_pd(v, s1);
    __m256d s2 = _mm256_blend_pd(_mm256_permute4x64_pd(v, 0x40), inf, 0x3);
    v = _mm256_min_pd(v, s2);
    v = _mm256_min_pd(v, carry);
    _mm256_storeu_pd(out + i, v);
    carry = _mm256_permute4x64_pd(v, 0xFF);
  }
  double m = _mm256_cvtsd_f64(carry);
  for (std::size_t i = n4; i < n; ++i) {
    if (x[i] < m) m = x[i];
    out[i] = m;
  }
}

}  // namespace levy::simd::detail
