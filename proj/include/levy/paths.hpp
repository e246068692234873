#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "levy/exponents.hpp"
#include "levy/grid.hpp"
#include "levy/rng.hpp"

namespace levy {

struct JumpRecord {
  double time;
  std::size_t grid_index;      // index of the epoch in the refined grid
  std::vector<double> dx;      // jump vector, length K
  std::vector<double> x_left;  // X(t-); filled as value - dx when left empty
};

/// One simulated path of the K-dimensional Levy process, cadlag convention:
/// values are post-jump, X(t-) = X(t) - dX(t) at jump epochs. Immutable after
/// construction and safe to share across threads.
class SamplePath {
 public:
  SamplePath(TimeGrid grid, std::size_t dim, std::vector<std::vector<double>> values,
             std::vector<JumpRecord> jumps);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return grid_.size(); }

  std::span<const double> component(std::size_t k) const { return values_[k]; }
  double value(std::size_t k, std::size_t i) const { return values_[k][i]; }
  double left_limit(std::size_t k, std::size_t i) const;
  std::span<const JumpRecord> jumps() const { return jumps_; }

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::vector<std::vector<double>> values_;  // per component, length n
  std::vector<JumpRecord> jumps_;            // sorted by grid index
};

/// Jump epochs and marks of one component on (0, T), drawn from `rng` in the
/// exact order simulate_levy consumes them (epoch, then mark, per arrival).
std::vector<std::pair<double, std::vector<double>>> draw_component_jumps(
    const JumpComponent& comp, double horizon, Stream& rng);

/// Simulates the model on `grid` refined with the exact jump epochs:
/// the drift term is exact, Gaussian increments are N(0, Sigma dt) through
/// the PSD-clipped factor, and jump epochs/sizes are drawn per component from
/// their own streams (labels "gauss" and "jump.<c>"), so the recorded jumps do
/// not depend on dt. Models flagged non-exact need allow_approximate.
SamplePath simulate_levy(const LevyModel& model, const TimeGrid& grid,
                         const SeedPolicy& seeds, std::uint64_t replication,
                         bool allow_approximate = false);

/// CSV dump: t, X_1..X_K, is_jump, dX_1..dX_K.
void dump_path_csv(const SamplePath& path, std::ostream& os);

}  // namespace levy
