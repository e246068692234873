#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "levy/integrands.hpp"

namespace levy {

/// Skorokhod reflection of z0 + X~: regulator L(t) = max(0, -inf_{s<=t}(z0 + X~(s)))
/// and storage level Z = z0 + X~ + L, on the integrated path's grid. The
/// infimum runs over grid values, jump left limits and the recorded sub-step
/// minima, so it is exact for drift+jump paths and exact in law when the
/// integrated path carries sampled Brownian-bridge minima.
struct ReflectedPath {
  double z0 = 0.0;
  std::vector<double> z;  // storage level, z[i] = z0 + X~(t_i) + L(t_i)
  std::vector<double> l;  // regulator, nondecreasing, l[0] = 0

  /// Z(t_i -): left limit across the jump at t_i (regulator jumps included).
  double left_limit_z(const IntegratedPath& xt, std::size_t i) const;
};

ReflectedPath skorokhod_reflect(double z0, const IntegratedPath& xt);

/// (X~(t)/t, Z(t)/t, L(t)/t) at a checkpoint t > 0 (snapped to the grid).
std::array<double, 3> rate_triple(const IntegratedPath& xt, const ReflectedPath& refl,
                                  double t);

/// CSV dump: t, Xt, Z, L.
void dump_reflected_csv(const IntegratedPath& xt, const ReflectedPath& refl,
                        std::ostream& os);

}  // namespace levy
