#include "levy/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace levy::simd {

namespace detail {
double sum_exp_weighted_scalar(const double*, const double*, std::size_t, double);
void exp_scaled_scalar(const double*, double*, std::size_t, double);
void prefix_min_scalar(const double*, double*, std::size_t);
#if LEVY_HAVE_AVX2_TU
double sum_exp_weighted_avx2(const double*, const double*, std::size_t, double);
void exp_scaled_avx2(const double*, double*, std::size_t, double);
void prefix_min_avx2(const double*, double*, std::size_t);
#endif
}  // namespace detail

namespace {

struct Table {
  double (*sum_exp_weighted)(const double*, const double*, std::size_t, double);
  void (*exp_scaled)(const double*, double*, std::size_t, double);
  void (*prefix_min)(const double*, double*, std::size_t);
};

constexpr Table kScalar{detail::sum_exp_weighted_scalar, detail::exp_scaled_scalar,
                        detail::prefix_min_scalar};
#if LEVY_HAVE_AVX2_TU
constexpr Table kAvx2{detail::sum_exp_weighted_avx2, detail::exp_scaled_avx2,
                      detail::prefix_min_avx2};
#endif

bool cpu_has_avx2() {
#if LEVY_HAVE_AVX2_TU
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct State {
  Backend backend;
  const Table* table;
};

State initial_state() {
  Backend b = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("LEVY_SIMD")) {
    const std::string_view v{env};
    if (v == "scalar") b = Backend::scalar;
    else if (v == "avx2" && cpu_has_avx2()) b = Backend::avx2;
    // anything else (including "auto") keeps the detected default
  }
#if LEVY_HAVE_AVX2_TU
  return {b, b == Backend::avx2 ? &kAvx2 : &kScalar};
#else
  return {b, &kScalar};
#endif
}

State& state() {
  static State s = initial_state();
  return s;
}

}  // namespace

Backend active_backend() { return state().backend; }

Backend best_backend() { return cpu_has_avx2() ? Backend::avx2 : Backend::scalar; }

bool set_backend(Backend b) {
  if (b == Backend::avx2) {
    if (!cpu_has_avx2()) return false;
#if LEVY_HAVE_AVX2_TU
    state() = {Backend::avx2, &kAvx2};
#endif
    return true;
  }
  state() = {Backend::scalar, &kScalar};
  return true;
}

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

double sum_exp_weighted(const double* z, const double* w, std::size_t n, double scale) {
  return state().table->sum_exp_weighted(z, w, n, scale);
}

void exp_scaled(const double* z, double* out, std::size_t n, double scale) {
  state().table->exp_scaled(z, out, n, scale);
}

void prefix_min(const double* x, double* out, std::size_t n) {
  state().table->prefix_min(x, out, n);
}

}  // namespace levy::simd
