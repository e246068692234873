#include "levy/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levy/common.hpp"

namespace levy {

TimeGrid TimeGrid::regular(double horizon, double dt) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InputError("TimeGrid: horizon must be positive, got " + std::to_string(horizon));
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InputError("TimeGrid: dt must be positive, got " + std::to_string(dt));
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(horizon / dt) + 2);
  t.push_back(0.0);
  for (std::size_t i = 1;; ++i) {
    const double v = static_cast<double>(i) * dt;
    if (v >= horizon - kMergeTol) break;
    t.push_back(v);
  }
  t.push_back(horizon);
  TimeGrid g;
  g.t_ = std::move(t);
  return g;
}

TimeGrid TimeGrid::from_points(std::vector<double> points) {
  if (points.size() < 2 || points.front() != 0.0)
    throw InputError("TimeGrid: point list must start at 0 and contain the horizon");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i] > points[i - 1]))
      throw InputError("TimeGrid: points must be strictly increasing");
  TimeGrid g;
  g.t_ = std::move(points);
  return g;
}

TimeGrid TimeGrid::refined(std::span<const double> extra) const {
  const double T = horizon();
  for (const double e : extra)
    if (!(e >= -kMergeTol) || !(e <= T + kMergeTol))
      throw InputError("TimeGrid::refined: time " + std::to_string(e) + " outside [0, " +
                       std::to_string(T) + "]");
  std::vector<double> add(extra.begin(), extra.end());
  std::sort(add.begin(), add.end());

  std::vector<double> merged;
  merged.reserve(t_.size() + add.size());
  std::size_t i = 0, j = 0;
  while (i < t_.size() || j < add.size()) {
    double next;
    if (j >= add.size() || (i < t_.size() && t_[i] <= add[j])) next = t_[i++];
    else next = add[j++];
    if (merged.empty() || next - merged.back() > kMergeTol) merged.push_back(next);
  }
  // never drop the horizon itself to a slightly-smaller merged neighbour
  if (merged.back() < T) merged.back() = T;
  TimeGrid g;
  g.t_ = std::move(merged);
  return g;
}

std::size_t TimeGrid::index_of(double t) const {
  const std::size_t i = floor_index(t);
  if (std::abs(t_[i] - t) > 1e-9)
    throw InputError("TimeGrid::index_of: " + std::to_string(t) + " is not a grid point");
  return i;
}

std::size_t TimeGrid::floor_index(double t) const {
  if (t < -kMergeTol || t > horizon() + 1e-9)
    throw InputError("TimeGrid::floor_index: time outside horizon");
  auto it = std::upper_bound(t_.begin(), t_.end(), t + kMergeTol);
  return static_cast<std::size_t>(it - t_.begin()) - 1;
}

}  // namespace levy
