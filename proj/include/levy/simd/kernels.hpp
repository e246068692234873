#pragma once

#include <cstddef>
#include <string_view>

// Hot numerical kernels shared by the path/martingale evaluators.
//
// Every kernel has a scalar reference implementation and (on x86-64) an AVX2
// variant selected at runtime. The two backends run the same per-element
// operation sequence and accumulate in the same fixed 4-lane order, so their
// results are bit-identical; the equivalence tests assert exact equality.
//
// exp_eval domain: arguments in [-708, 709.78]. Below the lower cutoff the
// result flushes to 0 (the true value is subnormal, < 3e-308); above the
// upper cutoff it saturates to +inf. Both backends use identical cutoffs.

namespace levy::simd {

enum class Backend { scalar, avx2 };

/// Kernels currently in use (set at startup from CPU features and the
/// LEVY_SIMD environment variable: "scalar", "avx2" or "auto").
Backend active_backend();

/// Best backend this CPU supports.
Backend best_backend();

/// Force a backend; returns false (and leaves the selection unchanged)
/// if the CPU does not support it.
bool set_backend(Backend b);

std::string_view backend_name(Backend b);

/// sum_i w[i] * exp(scale * z[i])
double sum_exp_weighted(const double* z, const double* w, std::size_t n, double scale);

/// out[i] = exp(scale * z[i])
void exp_scaled(const double* z, double* out, std::size_t n, double scale);

/// out[i] = min(x[0..i]) (running prefix minimum)
void prefix_min(const double* x, double* out, std::size_t n);

}  // namespace levy::simd
