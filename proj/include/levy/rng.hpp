#pragma once

#include <cstdint>
#include <string_view>

namespace levy {

/// Deterministic stream seeding: the same (base_seed, replication, label)
/// always yields the identical stream, and distinct labels give streams that
/// are independent for all practical purposes.
struct SeedPolicy {
  std::uint64_t base_seed = 0;

  std::uint64_t derive(std::uint64_t replication, std::string_view label) const;
};

/// xoshiro256++ with splitmix64 state expansion. Self-contained so that
/// sampled values are identical across standard libraries and platforms.
class Stream {
 public:
  explicit Stream(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on (0, 1] (safe under log()).
  double uniform01();

  /// Standard normal (Box-Muller; second variate cached).
  double normal();

  /// Exponential with the given rate.
  double exponential(double rate);

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace levy
