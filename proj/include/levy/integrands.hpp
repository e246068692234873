#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "levy/exponents.hpp"
#include "levy/grid.hpp"
#include "levy/paths.hpp"
#include "levy/rng.hpp"

namespace levy {

/// Right-continuous CTMC trajectory with exact transition epochs.
struct CtmcPath {
  std::size_t initial_state = 0;
  double horizon = 0.0;
  std::vector<double> transition_times;   // strictly increasing, in (0, horizon)
  std::vector<std::size_t> states_after;  // state entered at each transition

  std::size_t state_at(double t) const;      // cadlag
  std::size_t state_before(double t) const;  // left limit
};

/// Exact jump-chain / holding-time simulation. Input error on an invalid
/// generator (rows must sum to 0, off-diagonals >= 0).
CtmcPath simulate_ctmc(const Matrix& q, std::size_t initial, double horizon, Stream& rng);

/// Stationary distribution pi Q = 0, sum pi = 1. Config error if the chain
/// is not irreducible.
std::vector<double> ctmc_stationary(const Matrix& q);

// --- integrand specifications ----------------------------------------------

struct ConstantIntegrand {
  std::vector<double> levels;
};

/// levels[j] on [breakpoints[j-1], breakpoints[j]), cadlag.
struct PiecewiseIntegrand {
  std::vector<double> breakpoints;  // strictly increasing, inside (0, horizon)
  std::vector<std::vector<double>> levels;  // breakpoints.size() + 1 entries
};

/// I(t) = level_map[J(t)] for a CTMC J with generator q.
struct MarkovModulatedIntegrand {
  Matrix q;
  std::size_t initial_state = 0;
  std::vector<std::vector<double>> level_map;  // one level vector per state
};

using IntegrandSpec =
    std::variant<ConstantIntegrand, PiecewiseIntegrand, MarkovModulatedIntegrand>;

std::size_t integrand_dim(const IntegrandSpec& spec);
bool integrand_nonnegative(const IntegrandSpec& spec);

/// A realised integrand: a vector-valued cadlag step function. Deterministic
/// specs realise to themselves; the Markov-modulated spec realises through a
/// CTMC draw from the "ctmc" stream (independent of the path streams).
class RealizedIntegrand {
 public:
  RealizedIntegrand(std::size_t dim, double horizon, std::vector<double> switch_times,
                    std::vector<std::vector<double>> segment_levels,
                    std::vector<std::size_t> segment_states = {});

  std::size_t dim() const { return dim_; }
  double horizon() const { return horizon_; }
  std::size_t segments() const { return levels_.size(); }
  std::span<const double> switch_times() const { return switch_times_; }
  std::span<const double> segment_level(std::size_t seg) const { return levels_[seg]; }
  /// CTMC state per segment (empty for deterministic integrands).
  std::span<const std::size_t> segment_states() const { return states_; }

  std::size_t segment_of(double t) const;       // cadlag
  std::size_t segment_before(double t) const;   // left limit
  /// sup_t ||I(t)||_2; attained on a segment level, so exact.
  double bound() const;

 private:
  std::size_t dim_;
  double horizon_;
  std::vector<double> switch_times_;
  std::vector<std::vector<double>> levels_;  // switch_times.size() + 1
  std::vector<std::size_t> states_;
};

RealizedIntegrand realize_integrand(const IntegrandSpec& spec, double horizon,
                                    const SeedPolicy& seeds, std::uint64_t replication,
                                    CtmcPath* ctmc_out = nullptr);

/// I(t) or I(t-); cadlag convention at switch epochs. Input error outside [0, T].
std::vector<double> evaluate(const RealizedIntegrand& integrand, double t,
                             bool left_limit = false);

// --- pathwise stochastic integral -------------------------------------------

/// X~(t) = sum_k int_(0,t] I_k(s-) dX_k(s) on the path's grid.
/// substep_min[i] is the minimum of X~ over (t_i, t_{i+1}) excluding the jump
/// at t_{i+1}: the exact linear-segment minimum for drift+jump models, or the
/// sampled Brownian-bridge minimum when a bridge stream is supplied and the
/// model has a Gaussian part.
struct IntegratedPath {
  TimeGrid grid;
  std::vector<double> values;
  std::vector<std::size_t> jump_index;  // grid indices of X's jump epochs
  std::vector<double> jump_dx;          // dX~ = I(tau-)^T dX(tau)
  std::vector<double> substep_min;      // size n-1
  bool bridge_sampled = false;

  double left_limit(std::size_t i) const;
  double jump_at(std::size_t i) const;  // 0 when t_i is not a jump epoch
};

struct IntegrationOptions {
  /// When set and the model has a Gaussian part, sample the conditional
  /// minimum of the scalar Brownian bridge on each grid interval.
  Stream* bridge_stream = nullptr;
};

/// Internal error if the integrand's switch epochs are not grid points of x.
IntegratedPath stochastic_integral(const RealizedIntegrand& integrand,
                                   const LevyModel& model, const SamplePath& x,
                                   const IntegrationOptions& opts = {});

}  // namespace levy
