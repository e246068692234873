// Micro-benchmark for the numerical kernels: throughput of each backend on
// the array sizes the evaluators actually use.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "levy/rng.hpp"
#include "levy/simd/kernels.hpp"

using namespace levy;

namespace {

double time_once(void (*fn)(const double*, double*, std::size_t, double),
                 const double* z, double* out, std::size_t n, int iters) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < iters; ++i) fn(z, out, n, -1.0);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  const std::size_t n = 1 << 20;
  const int iters = 32;
  Stream rng(1);
  std::vector<double> z(n), w(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = 30.0 * rng.uniform01();
    w[i] = rng.uniform01();
  }

  std::printf("n = %zu doubles, %d iterations per measurement\n", n, iters);
  for (const auto backend : {simd::Backend::scalar, simd::best_backend()}) {
    if (!simd::set_backend(backend)) continue;
    volatile double sink = 0.0;

    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < iters; ++i)
      sink = sink + simd::sum_exp_weighted(z.data(), w.data(), n, -1.0);
    const double t_sum =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double t_exp = time_once(&simd::exp_scaled, z.data(), out.data(), n, iters);

    t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < iters; ++i) simd::prefix_min(z.data(), out.data(), n);
    const double t_min =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double scale = static_cast<double>(n) * iters * 1e-6;
    std::printf("%-6s  sum_exp_weighted %7.1f Melem/s   exp_scaled %7.1f Melem/s   "
                "prefix_min %7.1f Melem/s\n",
                std::string(simd::backend_name(backend)).c_str(), scale / t_sum,
                scale / t_exp, scale / t_min);
  }
  return 0;
}
