#include "levy/paths.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

#include "levy/csv.hpp"

namespace levy {

SamplePath::SamplePath(TimeGrid grid, std::size_t dim,
                       std::vector<std::vector<double>> values,
                       std::vector<JumpRecord> jumps)
    : grid_(std::move(grid)), dim_(dim), values_(std::move(values)), jumps_(std::move(jumps)) {
  if (values_.size() != dim_) throw InternalError("SamplePath: component count mismatch");
  for (const auto& v : values_)
    if (v.size() != grid_.size()) throw InternalError("SamplePath: value length mismatch");
  for (auto& j : jumps_) {
    if (j.grid_index >= grid_.size() || j.dx.size() != dim_)
      throw InternalError("SamplePath: bad jump record");
    if (j.x_left.empty()) {
      j.x_left.resize(dim_);
      for (std::size_t k = 0; k < dim_; ++k)
        j.x_left[k] = values_[k][j.grid_index] - j.dx[k];
    } else if (j.x_left.size() != dim_) {
      throw InternalError("SamplePath: bad left-limit record");
    }
  }
}

double SamplePath::left_limit(std::size_t k, std::size_t i) const {
  const auto it = std::lower_bound(
      jumps_.begin(), jumps_.end(), i,
      [](const JumpRecord& j, std::size_t idx) { return j.grid_index < idx; });
  if (it != jumps_.end() && it->grid_index == i) return it->x_left[k];
  return values_[k][i];
}

std::vector<std::pair<double, std::vector<double>>> draw_component_jumps(
    const JumpComponent& comp, double horizon, Stream& rng) {
  const std::size_t K = comp.law.dim();
  std::vector<std::pair<double, std::vector<double>>> out;
  std::vector<double> mark(K);
  for (double t = rng.exponential(comp.rate); t < horizon;
       t += rng.exponential(comp.rate)) {
    comp.law.sample(rng, mark);
    if (t <= TimeGrid::kMergeTol) continue;  // keep t = 0 jump-free
    out.emplace_back(t, mark);
  }
  return out;
}

SamplePath simulate_levy(const LevyModel& model, const TimeGrid& grid,
                         const SeedPolicy& seeds, std::uint64_t replication,
                         bool allow_approximate) {
  if (!model.exact() && !allow_approximate)
    throw PreconditionError(
        "simulate_levy: model is an approximate truncation; pass allow_approximate");

  const std::size_t K = model.dim();
  const double T = grid.horizon();

  // jump epochs and marks, one stream per component
  std::map<double, std::vector<double>> jumps_by_time;  // merges float collisions
  for (std::size_t c = 0; c < model.jumps().size(); ++c) {
    Stream js(seeds.derive(replication, "jump." + std::to_string(c)));
    for (auto& [t, mark] : draw_component_jumps(model.jumps()[c], T, js)) {
      auto [it, fresh] = jumps_by_time.try_emplace(t, mark);
      if (!fresh)
        for (std::size_t k = 0; k < K; ++k) it->second[k] += mark[k];
    }
  }

  std::vector<double> epochs;
  epochs.reserve(jumps_by_time.size());
  for (const auto& [t, dx] : jumps_by_time) epochs.push_back(t);
  TimeGrid refined = grid.refined(epochs);
  const std::size_t n = refined.size();

  std::vector<std::vector<double>> values(K, std::vector<double>(n, 0.0));

  // Gaussian part, incremental; drift in closed form; jumps added below.
  if (model.has_gaussian_part()) {
    Stream gs(seeds.derive(replication, "gauss"));
    const Matrix& B = model.gaussian_factor();
    std::vector<double> xi(K), cum(K, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double sdt = std::sqrt(refined[i + 1] - refined[i]);
      for (std::size_t k = 0; k < K; ++k) xi[k] = gs.normal();
      for (std::size_t k = 0; k < K; ++k) {
        cum[k] += sdt * dot(B.row(k), xi);
        values[k][i + 1] = cum[k];
      }
    }
  }

  std::vector<JumpRecord> records;
  records.reserve(jumps_by_time.size());
  {
    std::vector<double> jump_cum(K, 0.0);
    auto it = jumps_by_time.begin();
    for (std::size_t i = 0; i < n; ++i) {
      const double t = refined[i];
      const bool is_jump =
          it != jumps_by_time.end() && std::abs(it->first - t) <= TimeGrid::kMergeTol;
      if (is_jump) {
        // post-jump value = left limit + dx, so the cadlag identity is exact;
        // epochs merged by the grid dedup collapse into one record
        JumpRecord rec{t, i, it->second, std::vector<double>(K)};
        ++it;
        while (it != jumps_by_time.end() && std::abs(it->first - t) <= TimeGrid::kMergeTol) {
          for (std::size_t k = 0; k < K; ++k) rec.dx[k] += it->second[k];
          ++it;
        }
        for (std::size_t k = 0; k < K; ++k) {
          rec.x_left[k] = values[k][i] + model.drift()[k] * t + jump_cum[k];
          values[k][i] = rec.x_left[k] + rec.dx[k];
          jump_cum[k] += rec.dx[k];
        }
        records.push_back(std::move(rec));
      } else {
        for (std::size_t k = 0; k < K; ++k)
          values[k][i] += model.drift()[k] * t + jump_cum[k];
      }
    }
    if (it != jumps_by_time.end()) throw InternalError("simulate_levy: unplaced jump epoch");
  }

  return SamplePath(std::move(refined), K, std::move(values), std::move(records));
}

void dump_path_csv(const SamplePath& path, std::ostream& os) {
  const std::size_t K = path.dim();
  os << "t";
  for (std::size_t k = 0; k < K; ++k) os << ",X_" << (k + 1);
  os << ",is_jump";
  for (std::size_t k = 0; k < K; ++k) os << ",dX_" << (k + 1);
  os << "\n";
  auto jump_it = path.jumps().begin();
  for (std::size_t i = 0; i < path.size(); ++i) {
    os << csv::fmt(path.grid()[i]);
    for (std::size_t k = 0; k < K; ++k) os << ',' << csv::fmt(path.value(k, i));
    const bool is_jump = jump_it != path.jumps().end() && jump_it->grid_index == i;
    os << ',' << (is_jump ? 1 : 0);
    for (std::size_t k = 0; k < K; ++k)
      os << ',' << csv::fmt(is_jump ? jump_it->dx[k] : 0.0);
    os << "\n";
    if (is_jump) ++jump_it;
  }
}

}  // namespace levy
