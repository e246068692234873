#pragma once

#include <cstdint>

// Constants for the shared exp(x) algorithm:
//   n = nearbyint(x * log2e);  r = x - n*ln2_hi - n*ln2_lo;
//   exp(x) = 2^n * P13(r), Horner with fused multiply-adds.
// Both backends must follow this sequence exactly so results match bitwise.

namespace levy::simd::detail {

inline constexpr double kLog2E = 1.4426950408889634074;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;

// exp underflows to subnormals below ~-708.39; flush to zero from -708.
inline constexpr double kExpLo = -708.0;
// Saturate to +inf above 709.4 (keeps the 2^n exponent n <= 1023).
inline constexpr double kExpHi = 709.4;

// Taylor coefficients 1/k!, k = 13 .. 0. |r| <= ln2/2, truncation < 1e-17.
inline constexpr double kExpPoly[14] = {
    1.6059043836821614599e-10,  // 1/13!
    2.0876756987868098979e-09,  // 1/12!
    2.5052108385441718775e-08,  // 1/11!
    2.7557319223985890653e-07,  // 1/10!
    2.7557319223985892511e-06,  // 1/9!
    2.4801587301587301566e-05,  // 1/8!
    1.9841269841269841253e-04,  // 1/7!
    1.3888888888888889419e-03,  // 1/6!
    8.3333333333333332177e-03,  // 1/5!
    4.1666666666666664354e-02,  // 1/4!
    1.6666666666666665741e-01,  // 1/3!
    5.0000000000000000000e-01,  // 1/2!
    1.0000000000000000000e+00,  // 1/1!
    1.0000000000000000000e+00,  // 1/0!
};

// 2^n via exponent-field construction; caller guarantees n in [-1022, 1023].
inline double ldexp_fast(double v, std::int64_t n) {
  const std::uint64_t bits = static_cast<std::uint64_t>(n + 1023) << 52;
  double scale;
  __builtin_memcpy(&scale, &bits, sizeof scale);
  return v * scale;
}

}  // namespace levy::simd::detail
