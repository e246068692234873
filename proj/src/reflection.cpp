#include "levy/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "levy/csv.hpp"
#include "levy/simd/kernels.hpp"

namespace levy {

ReflectedPath skorokhod_reflect(double z0, const IntegratedPath& xt) {
  if (!(z0 >= 0.0)) throw InputError("skorokhod_reflect: z0 must be nonnegative");
  const std::size_t n = xt.values.size();
  ReflectedPath out;
  out.z0 = z0;
  out.z.resize(n);
  out.l.resize(n);
  if (n == 0) return out;

  // infimum candidates: value at t_0, then min(sub-step minimum, post-jump value)
  std::vector<double> cand(n);
  cand[0] = xt.values[0];
  for (std::size_t i = 1; i < n; ++i)
    cand[i] = std::min(xt.substep_min[i - 1], xt.values[i]);
  std::vector<double> runmin(n);
  simd::prefix_min(cand.data(), runmin.data(), n);

  for (std::size_t i = 0; i < n; ++i) {
    out.l[i] = std::max(0.0, -(z0 + runmin[i]));
    out.z[i] = z0 + xt.values[i] + out.l[i];
  }
  return out;
}

double ReflectedPath::left_limit_z(const IntegratedPath& xt, std::size_t i) const {
  if (i == 0) return z[0];
  const double x_left = xt.values[i] - xt.jump_at(i);
  const double l_left =
      std::max(l[i - 1], std::max(0.0, -(z0 + xt.substep_min[i - 1])));
  return z0 + x_left + l_left;
}

std::array<double, 3> rate_triple(const IntegratedPath& xt, const ReflectedPath& refl,
                                  double t) {
  if (!(t > 0.0)) throw InputError("rate_triple: t must be positive");
  const std::size_t i = xt.grid.floor_index(t);
  const double gt = xt.grid[i];
  return {xt.values[i] / gt, refl.z[i] / gt, refl.l[i] / gt};
}

void dump_reflected_csv(const IntegratedPath& xt, const ReflectedPath& refl,
                        std::ostream& os) {
  os << "t,Xt,Z,L\n";
  for (std::size_t i = 0; i < xt.values.size(); ++i)
    os << csv::fmt(xt.grid[i]) << ',' << csv::fmt(xt.values[i]) << ','
       << csv::fmt(refl.z[i]) << ',' << csv::fmt(refl.l[i]) << "\n";
}

}  // namespace levy
