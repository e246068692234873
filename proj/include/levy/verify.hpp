#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levy/exponents.hpp"
#include "levy/integrands.hpp"
#include "levy/martingale.hpp"
#include "levy/paths.hpp"
#include "levy/reflection.hpp"

namespace levy {

struct ReflectionSettings {
  bool enabled = false;
  double z0 = 0.0;
  /// automatic: sample Brownian-bridge sub-step minima iff the model has a
  /// Gaussian part (exact-in-law reflection); off reproduces the grid-only
  /// running minimum with its O(sqrt(dt)) regulator bias.
  enum class Bridge { automatic, on, off };
  Bridge bridge = Bridge::automatic;
};

/// Every pass/fail threshold used by the harness; all config-visible.
struct Tolerances {
  double z = 4.0;             // CI half-width in standard errors
  double pk_rel = 0.02;       // PK limit: relative tolerance on the target
  double pk_abs = 0.0;        // PK limit: absolute tolerance (transient target 0)
  double l2_rel = 0.10;       // L2 identity: relative gap
  double reflected_rel = 0.03;
  double reflected_abs = 0.0;
  // rate decay: pass iff slope_min <= slope <= slope_max. The one-sided
  // default accepts any decay at least as fast as t^{-0.35} (a transient
  // input decays like t^{-1}); a two-sided window is a per-fixture choice.
  double slope_min = -1e9;
  double slope_max = -0.35;
  double pass_fraction = 0.95;  // per-checkpoint tests: fraction that must pass
};

struct Experiment {
  explicit Experiment(LevyModel m) : model(std::move(m)) {}

  LevyModel model;
  IntegrandSpec integrand;
  ReflectionSettings reflection;
  std::optional<FiniteVariationSpec> y_spec;  // Y == 0 when absent and unreflected
  double horizon = 1.0;
  double dt = 0.01;
  std::vector<double> checkpoints;
  std::size_t replications = 2;
  SeedPolicy seeds;
  Tolerances tol;
  int threads = 0;  // 0 = hardware concurrency
  bool allow_approximate = false;

  std::size_t pasta_observer = 0;  // jump-component index of the Poisson observer
  enum class AProcess { const_one, sinusoid, exp_neg_z_indep };
  AProcess a_process = AProcess::exp_neg_z_indep;  // test_compensation observand

  // negative-control knobs
  double corrupt_term_phi = 1.0;
  bool pasta_anticipating = false;

  void validate() const;
};

struct CheckRow {
  std::string test;
  double t = 0.0;
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;
  double z = 0.0;
  bool pass = false;
  std::string note;
};

struct MCReport {
  std::string test;
  std::vector<CheckRow> rows;
  bool pass = true;
  double runtime_seconds = 0.0;
  std::uint64_t base_seed = 0;
  std::size_t replications = 0;
  std::size_t excluded = 0;
};

/// One realised replication of the experiment's system.
struct SystemRealization {
  TimeGrid grid;
  RealizedIntegrand integrand;
  CtmcPath ctmc;  // empty for deterministic integrands
  SamplePath x;
  IntegratedPath xt;
  std::optional<ReflectedPath> refl;
  const LevyModel* model = nullptr;
  const FiniteVariationSpec* y_spec = nullptr;

  /// Builds the martingale evaluation context (reflected or explicit-Y).
  EvalContext context() const;
};

SystemRealization realize_system(const Experiment& exp, std::uint64_t replication,
                                 const std::string& stream_prefix = "");

// The statistical tests. Each turns one claim into per-checkpoint estimates
// with normal-approximation confidence intervals and a verdict.
MCReport test_zero_mean(const Experiment& exp);
MCReport test_l2_identity(const Experiment& exp);
MCReport test_rate_decay(const Experiment& exp);
MCReport test_pk_limit(const Experiment& exp);
MCReport test_compensation(const Experiment& exp);
MCReport test_pasta(const Experiment& exp);
MCReport test_strong_law(const Experiment& exp);
MCReport test_reflected_limit(const Experiment& exp);

/// Analytic strong-law rate xi = sum_k beta_k E X_k(1) for constant or
/// Markov-modulated integrands (config error otherwise).
double strong_law_rate(const Experiment& exp);

/// PK limit target alpha phi'(0) / phi(alpha), or 0 when phi'(0) <= 0.
double pk_target(const LevyModel& model, double alpha);

using TestFn = MCReport (*)(const Experiment&);
/// name -> test function; throws ConfigError for unknown names.
TestFn test_by_name(const std::string& name);
const std::vector<std::string>& all_test_names();

/// Report CSV: schema test,t,estimate,se,target,z,verdict.
void write_report_csv(std::span<const MCReport> reports, std::ostream& os,
                      bool with_timestamp);

}  // namespace levy
