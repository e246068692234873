#include "levy/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <mutex>
#include <ostream>
#include <thread>

#include "levy/csv.hpp"
#include "levy/simd/kernels.hpp"
#include "levy/stats.hpp"

namespace levy {

namespace {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

/// Runs fn(rep) over a worker pool; results are indexed by replication, so
/// any later reduction is replication-ordered and bit-exact for every thread
/// count.
std::vector<std::vector<double>> run_replications(
    std::size_t n, int threads, const std::function<std::vector<double>(std::uint64_t)>& fn) {
  std::vector<std::vector<double>> results(n);
  int nt = threads <= 0 ? static_cast<int>(std::thread::hardware_concurrency()) : threads;
  nt = std::max(1, std::min<int>(nt, static_cast<int>(n)));
  if (nt == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt));
  for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t j) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

bool fraction_pass(std::size_t npass, std::size_t total, double fraction) {
  return static_cast<double>(npass) >= fraction * static_cast<double>(total) - 1e-12;
}

std::vector<double> interval_lengths(const TimeGrid& grid) {
  std::vector<double> d(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) d[i] = grid[i + 1] - grid[i];
  return d;
}

std::size_t final_index(const TimeGrid& grid, const Experiment& exp) {
  return grid.floor_index(exp.checkpoints.back());
}

const FiniteVariationSpec& zero_y_spec() {
  static const FiniteVariationSpec spec{};
  return spec;
}

SeedPolicy prefixed(const SeedPolicy& seeds, const std::string& prefix) {
  if (prefix.empty()) return seeds;
  return SeedPolicy{seeds.derive(0, prefix)};
}

void finish(MCReport& rep, const Experiment& exp, const Timer& timer) {
  rep.runtime_seconds = timer.seconds();
  rep.base_seed = exp.seeds.base_seed;
  if (rep.replications == 0) rep.replications = exp.replications;
}

}  // namespace

void Experiment::validate() const {
  if (replications < 2) throw ConfigError("experiment: replications must be >= 2");
  if (!(horizon > 0.0)) throw ConfigError("experiment: horizon must be positive");
  if (!(dt > 0.0)) throw ConfigError("experiment: dt must be positive");
  if (checkpoints.empty()) throw ConfigError("experiment: no checkpoints");
  for (const double c : checkpoints)
    if (!(c > 0.0) || c > horizon + 1e-9)
      throw ConfigError("experiment: checkpoints must lie in (0, horizon]");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw ConfigError("experiment: checkpoints must be sorted");
  if (integrand_dim(integrand) != model.dim())
    throw ConfigError("experiment: integrand dimension != model dimension");
  if (reflection.enabled && y_spec)
    throw ConfigError("experiment: reflection and an explicit Y spec are exclusive");
  if (reflection.enabled && !(reflection.z0 >= 0.0))
    throw ConfigError("experiment: z0 must be nonnegative");
  if (!(tol.z > 0.0)) throw ConfigError("experiment: z must be positive");
}

EvalContext SystemRealization::context() const {
  if (refl) return make_context_reflected(*model, integrand, xt, *refl);
  return make_context_explicit(*model, integrand, xt, y_spec ? *y_spec : zero_y_spec());
}

SystemRealization realize_system(const Experiment& exp, std::uint64_t replication,
                                 const std::string& stream_prefix) {
  const SeedPolicy seeds = prefixed(exp.seeds, stream_prefix);

  TimeGrid base = TimeGrid::regular(exp.horizon, exp.dt);
  std::vector<double> extra;
  if (exp.y_spec) {
    for (const double t : exp.y_spec->node_times)
      if (t > 0.0 && t < exp.horizon) extra.push_back(t);
    for (const auto& j : exp.y_spec->jumps) extra.push_back(j.time);
  }

  CtmcPath ctmc;
  RealizedIntegrand integrand =
      realize_integrand(exp.integrand, exp.horizon, seeds, replication, &ctmc);
  extra.insert(extra.end(), integrand.switch_times().begin(),
               integrand.switch_times().end());
  TimeGrid grid = base.refined(extra);

  SamplePath x = simulate_levy(exp.model, grid, seeds, replication, exp.allow_approximate);

  const bool bridge =
      exp.reflection.bridge == ReflectionSettings::Bridge::on ||
      (exp.reflection.bridge == ReflectionSettings::Bridge::automatic &&
       exp.model.has_gaussian_part());
  Stream bridge_stream(seeds.derive(replication, "bridge"));
  IntegrationOptions opts;
  if (bridge) opts.bridge_stream = &bridge_stream;
  IntegratedPath xt = stochastic_integral(integrand, exp.model, x, opts);

  SystemRealization sys{std::move(grid), std::move(integrand), std::move(ctmc),
                        std::move(x),    std::move(xt),        std::nullopt,
                        &exp.model,      exp.y_spec ? &*exp.y_spec : nullptr};
  if (exp.reflection.enabled)
    sys.refl = skorokhod_reflect(exp.reflection.z0, sys.xt);
  return sys;
}

// ---------------------------------------------------------------------------

MCReport test_zero_mean(const Experiment& exp) {
  exp.validate();
  Timer timer;
  const auto results = run_replications(
      exp.replications, exp.threads, [&](std::uint64_t r) {
        const auto sys = realize_system(exp, r);
        return kw_martingale_real(sys.context(), exp.checkpoints,
                                  {exp.corrupt_term_phi})
            .total;
      });

  MCReport rep;
  rep.test = "zero_mean";
  std::size_t npass = 0;
  for (std::size_t j = 0; j < exp.checkpoints.size(); ++j) {
    const MeanSe ms = mean_se(column(results, j));
    CheckRow row{"zero_mean", exp.checkpoints[j], ms.mean, ms.se, 0.0, exp.tol.z,
                 false,       ""};
    if (ms.se == 0.0) {
      row.pass = ms.mean == 0.0;
      if (!row.pass) row.note = "degenerate variance with nonzero mean";
    } else {
      row.pass = std::abs(ms.mean) <= exp.tol.z * ms.se;
    }
    npass += row.pass;
    rep.rows.push_back(std::move(row));
  }
  rep.pass = fraction_pass(npass, exp.checkpoints.size(), exp.tol.pass_fraction);
  finish(rep, exp, timer);
  return rep;
}

MCReport test_l2_identity(const Experiment& exp) {
  exp.validate();
  Timer timer;
  const std::size_t nc = exp.checkpoints.size();
  const auto results = run_replications(
      exp.replications, exp.threads, [&](std::uint64_t r) {
        const auto sys = realize_system(exp, r);
        const auto ctx = sys.context();
        const auto m = kw_martingale_real(ctx, exp.checkpoints);
        const auto qv = quadratic_variation(ctx, exp.checkpoints);
        std::vector<double> out(2 * nc);
        for (std::size_t j = 0; j < nc; ++j) {
          out[j] = m.total[j];
          out[nc + j] = qv.compensator[j];
        }
        return out;
      });

  MCReport rep;
  rep.test = "l2_identity";
  std::size_t npass = 0;
  for (std::size_t j = 0; j < nc; ++j) {
    std::vector<double> msq(exp.replications), diff(exp.replications);
    for (std::size_t r = 0; r < exp.replications; ++r) {
      msq[r] = results[r][j] * results[r][j];
      diff[r] = msq[r] - results[r][nc + j];
    }
    const MeanSe m2 = mean_se(msq);
    const MeanSe comp = mean_se(column(results, nc + j));
    const MeanSe d = mean_se(diff);
    CheckRow row{"l2_identity", exp.checkpoints[j], m2.mean, d.se, comp.mean,
                 exp.tol.z,     false,            ""};
    const double gap = std::abs(d.mean);
    row.pass = gap <= exp.tol.l2_rel * std::abs(comp.mean) || gap <= exp.tol.z * d.se;
    if (std::abs(comp.mean) > 0.0)
      row.note = "relative gap " + csv::fmt(gap / std::abs(comp.mean));
    npass += row.pass;
    rep.rows.push_back(std::move(row));
  }
  rep.pass = fraction_pass(npass, nc, exp.tol.pass_fraction);
  finish(rep, exp, timer);
  return rep;
}

MCReport test_rate_decay(const Experiment& exp) {
  exp.validate();
  if (exp.checkpoints.size() < 3)
    throw ConfigError("rate_decay: need at least 3 checkpoints for a slope fit");
  Timer timer;
  const auto results = run_replications(
      exp.replications, exp.threads, [&](std::uint64_t r) {
        const auto sys = realize_system(exp, r);
        return kw_martingale_real(sys.context(), exp.checkpoints).total;
      });

  MCReport rep;
  rep.test = "rate_decay";
  std::vector<double> med(exp.checkpoints.size());
  for (std::size_t j = 0; j < exp.checkpoints.size(); ++j) {
    std::vector<double> ratios(exp.replications);
    for (std::size_t r = 0; r < exp.replications; ++r)
      ratios[r] = std::abs(results[r][j]) / exp.checkpoints[j];
    med[j] = median(std::move(ratios));
    rep.rows.push_back(CheckRow{"rate_decay", exp.checkpoints[j], med[j], 0.0, 0.0, 0.0,
                                true, "median |M(t)/t|"});
  }

  const bool all_zero = std::all_of(med.begin(), med.end(), [](double m) { return m == 0.0; });
  CheckRow slope_row{"rate_decay", exp.checkpoints.back(), 0.0, 0.0, -0.5, 0.0, false,
                     "log-log slope, window [" + csv::fmt(exp.tol.slope_min) + "," +
                         csv::fmt(exp.tol.slope_max) + "]"};
  if (all_zero) {
    slope_row.pass = true;
    slope_row.note = "degenerate: M identically 0";
  } else if (std::any_of(med.begin(), med.end(), [](double m) { return m <= 0.0; })) {
    slope_row.pass = false;
    slope_row.note = "zero median at some checkpoint";
  } else {
    std::vector<double> lx(med.size()), ly(med.size());
    for (std::size_t j = 0; j < med.size(); ++j) {
      lx[j] = std::log(exp.checkpoints[j]);
      ly[j] = std::log(med[j]);
    }
    const double slope = ls_slope(lx, ly);
    slope_row.estimate = slope;
    slope_row.pass = slope >= exp.tol.slope_min && slope <= exp.tol.slope_max;
  }
  rep.rows.push_back(slope_row);
  rep.pass = slope_row.pass;
  finish(rep, exp, timer);
  return rep;
}

double pk_target(const LevyModel& model, double alpha) {
  const double mean = model.mean_vector()[0];  // phi'(0) = -mean
  if (-mean <= 0.0) return 0.0;
  std::vector<double> a{alpha};
  return alpha * (-mean) / model.phi(a);
}

MCReport test_pk_limit(const Experiment& exp) {
  exp.validate();
  if (exp.model.dim() != 1) throw ConfigError("pk_limit: model must be 1-dimensional");
  const auto* cons = std::get_if<ConstantIntegrand>(&exp.integrand);
  if (!cons) throw ConfigError("pk_limit: integrand must be constant");
  const double alpha = cons->levels[0];
  if (!(alpha > 0.0)) throw InputError("pk_limit: alpha must be positive");
  if (!exp.reflection.enabled) throw ConfigError("pk_limit: requires a reflected run");

  Timer timer;
  const auto results = run_replications(
      exp.replications, exp.threads, [&](std::uint64_t r) {
        const auto sys = realize_system(exp, r);
        const auto dts = interval_lengths(sys.xt.grid);
        const std::size_t idx = final_index(sys.xt.grid, exp);
        const double t = sys.xt.grid[idx];
        const double avg =
            simd::sum_exp_weighted(sys.refl->z.data(), dts.data(), idx, -1.0) / t;
        return std::vector<double>{avg};
      });

  const MeanSe ms = mean_se(column(results, 0));
  const double target = pk_target(exp.model, alpha);
  MCReport rep;
  rep.test = "pk_limit";
  CheckRow row{"pk_limit", exp.checkpoints.back(), ms.mean, ms.se, target, exp.tol.z,
               false,      ""};
  const double gap = std::abs(ms.mean - target);
  row.pass = gap <= std::max({exp.tol.pk_rel * std::abs(target), exp.tol.z * ms.se,
                              exp.tol.pk_abs});
  if (target == 0.0) row.note = "transient/null-recurrent target";
  if (exp.model.has_gaussian_part() && exp.model.jumps().empty() &&
      exp.model.drift()[0] < 0.0) {
    // reflected Brownian motion: stationary level is Exp(2|c|/sigma^2)
    const double theta = -2.0 * exp.model.drift()[0] / exp.model.covariance()(0, 0);
    row.note = "stationary Exp(" + csv::fmt(theta) +
               ") transform cross-check target " + csv::fmt(theta / (theta + alpha));
  }
  rep.rows.push_back(std::move(row));
  rep.pass = rep.rows.back().pass;
  finish(rep, exp, timer);
  return rep;
}

MCReport test_compensation(const Experiment& exp) {
  exp.validate();
  if (exp.model.dim() != 1) throw ConfigError("compensation: model must be 1-dimensional");
  const double mean = exp.model.mean_vector()[0];

  Timer timer;
  const auto results = run_replications(
      exp.replications, exp.threads, [&](std::uint64_t r) {
        const auto sys = realize_system(exp, r);
        const TimeGrid& grid = sys.x.grid();
        const std::size_t n = grid.size();

        // observand A at the grid points of X
        std::vector<double> a(n);
        switch (exp.a_process) {
          case Experiment::AProcess::const_one:
            std::fill(a.begin(), a.end(), 1.0);
            break;
          case Experiment::AProcess::sinusoid:
            for (std::size_t i = 0; i < n; ++i) a[i] = 0.5 + 0.5 * std::sin(grid[i]);
            break;
          case Experiment::AProcess::exp_neg_z_indep: {
            // independent reflected run of the same model on a refinement of
            // this grid, evaluated at this grid's points
            const SeedPolicy obs_seeds = prefixed(exp.seeds, "obs");
            SamplePath ox = simulate_levy(exp.model, grid, obs_seeds, r,
                                          exp.allow_approximate);
            RealizedIntegrand ones(1, exp.horizon, {},
                                   {std::vector<double>{1.0}});
            Stream obs_bridge(obs_seeds.derive(r, "bridge"));
            IntegrationOptions opts;
            if (exp.model.has_gaussian_part()) opts.bridge_stream = &obs_bridge;
            IntegratedPath oxt = stochastic_integral(ones, exp.model, ox, opts);
            ReflectedPath orefl = skorokhod_reflect(0.0, oxt);
            std::size_t oi = 0;
            for (std::size_t i = 0; i < n; ++i) {
              while (oxt.grid[oi] < grid[i] - TimeGrid::kMergeTol) ++oi;
              a[i] = std::exp(-orefl.z[oi]);
            }
            break;
          }
        }

        std::vector<double> out;
        out.reserve(exp.checkpoints.size());
        double integral_a = 0.0;   // int A ds
        double integral_ax = 0.0;  // int A(s-) dX
        std::size_t prev = 0, jr = 0;
        const auto jumps = sys.x.jumps();
        for (const double c : exp.checkpoints) {
          const std::size_t idx = grid.floor_index(c);
          for (std::size_t i = prev; i < idx; ++i) {
            const double dt_i = grid[i + 1] - grid[i];
            double cont_inc = sys.x.value(0, i + 1) - sys.x.value(0, i);
            integral_a += a[i] * dt_i;
            integral_ax += a[i] * cont_inc;
          }
          // jump part: the left-endpoint continuous sum above included the
          // jumps inside the increments; remove them and re-add at A(tau-)
          while (jr < jumps.size() && jumps[jr].grid_index <= idx) {
            const std::size_t gi = jumps[jr].grid_index;
            integral_ax -= a[gi - 1] * jumps[jr].dx[0];
            integral_ax += a[gi] * jumps[jr].dx[0];
            ++jr;
          }
          prev = idx;
          const double t = grid[idx];
          out.push_back((integral_ax - mean * integral_a) / t);
        }
        return out;
      });

  MCReport rep;
  rep.test = "compensation";
  std::size_t npass = 0;
  for (std::size_t j = 0; j < exp.checkpoints.size(); ++j) {
    const MeanSe ms = mean_se(column(results, j));
    CheckRow row{"compensation", exp.checkpoints[j], ms.mean, ms.se, 0.0, exp.tol.z,
                 false,          ""};
    row.pass = ms.se == 0.0 ? ms.mean == 0.0 : std::abs(ms.mean) <= exp.tol.z * ms.se;
    npass += row.pass;
    rep.rows.push_back(std::move(row));
  }
  rep.pass = fraction_pass(npass, exp.checkpoints.size(), exp.tol.pass_fraction);
  finish(rep, exp, timer);
  return rep;
}

MCReport test_pasta(const Experiment& exp) {
  exp.validate();
  if (exp.pasta_observer >= exp.model.jumps().size())
    throw ConfigError("pasta: observer component index out of range");
  if (!exp.reflection.enabled)
    throw ConfigError("pasta: requires a reflected run (A = e^{-Z})");
  const bool single_component = exp.model.jumps().size() == 1;

  Timer timer;
  const auto results = run_replications(
      exp.replications, exp.threads, [&](std::uint64_t r) -> std::vector<double> {
        const auto sys = realize_system(exp, r);
        const TimeGrid& grid = sys.xt.grid;
        const std::size_t idx = final_index(grid, exp);
        const double t = grid[idx];

        // arrival epochs of the observer component
        std::vector<double> arrivals;
        if (single_component) {
          for (std::size_t j = 0; j < sys.xt.jump_index.size(); ++j)
            if (sys.xt.jump_index[j] <= idx) arrivals.push_back(grid[sys.xt.jump_index[j]]);
        } else {
          Stream js(exp.seeds.derive(
              r, "jump." + std::to_string(exp.pasta_observer)));
          for (const auto& [tau, mark] :
               draw_component_jumps(exp.model.jumps()[exp.pasta_observer],
                                    exp.horizon, js))
            if (tau <= t + TimeGrid::kMergeTol) arrivals.push_back(tau);
        }
        if (arrivals.empty()) return {0.0, 0.0};  // excluded path

        // the observed functional: A = e^{-Z} of the workload the arrivals
        // drive (default), or the deterministic variants
        double arr_sum = 0.0, time_avg = 0.0;
        const auto dts = interval_lengths(grid);
        switch (exp.a_process) {
          case Experiment::AProcess::const_one:
            arr_sum = static_cast<double>(arrivals.size());
            time_avg = (grid[idx] - grid[0]) / t;  // exactly 1
            break;
          case Experiment::AProcess::sinusoid:
            for (const double tau : arrivals) arr_sum += 0.5 + 0.5 * std::sin(tau);
            for (std::size_t i = 0; i < idx; ++i)
              time_avg += (0.5 + 0.5 * std::sin(grid[i])) * dts[i];
            time_avg /= t;
            break;
          case Experiment::AProcess::exp_neg_z_indep:
            for (const double tau : arrivals) {
              const std::size_t gi = grid.floor_index(tau);
              const double zv = exp.pasta_anticipating
                                    ? sys.refl->z[gi]
                                    : sys.refl->left_limit_z(sys.xt, gi);
              arr_sum += std::exp(-zv);
            }
            time_avg =
                simd::sum_exp_weighted(sys.refl->z.data(), dts.data(), idx, -1.0) / t;
            break;
        }
        const double arr_avg = arr_sum / static_cast<double>(arrivals.size());
        return {1.0, arr_avg - time_avg};
      });

  std::vector<double> gaps;
  std::size_t excluded = 0;
  for (const auto& r : results) {
    if (r[0] == 0.0) ++excluded;
    else gaps.push_back(r[1]);
  }
  MCReport rep;
  rep.test = "pasta";
  rep.excluded = excluded;
  if (gaps.size() < 2) {
    rep.pass = false;
    rep.rows.push_back(CheckRow{"pasta", exp.checkpoints.back(), 0.0, 0.0, 0.0,
                                exp.tol.z, false, "fewer than 2 paths with arrivals"});
  } else {
    const MeanSe ms = mean_se(gaps);
    CheckRow row{"pasta", exp.checkpoints.back(), ms.mean, ms.se, 0.0, exp.tol.z,
                 false,   ""};
    row.pass = std::abs(ms.mean) <= exp.tol.z * ms.se;
    if (excluded > 0) row.note = csv::fmt(static_cast<double>(excluded)) + " paths excluded";
    if (exp.pasta_anticipating) row.note += " anticipating control";
    rep.pass = row.pass;
    rep.rows.push_back(std::move(row));
  }
  rep.replications = gaps.size();
  finish(rep, exp, timer);
  return rep;
}

double strong_law_rate(const Experiment& exp) {
  const std::vector<double> mean = exp.model.mean_vector();
  if (const auto* c = std::get_if<ConstantIntegrand>(&exp.integrand))
    return dot(c->levels, mean);
  if (const auto* mm = std::get_if<MarkovModulatedIntegrand>(&exp.integrand)) {
    const std::vector<double> pi = ctmc_stationary(mm->q);
    double xi = 0.0;
    for (std::size_t s = 0; s < pi.size(); ++s)
      xi += pi[s] * dot(mm->level_map[s], mean);
    return xi;
  }
  throw ConfigError("strong_law_rate: integrand must be constant or Markov-modulated");
}

MCReport test_strong_law(const Experiment& exp) {
  exp.validate();
  const double xi = strong_law_rate(exp);
  Timer timer;
  const auto results = run_replications(
      exp.replications, exp.threads, [&](std::uint64_t r) {
        const auto sys = realize_system(exp, r);
        const std::size_t idx = final_index(sys.xt.grid, exp);
        return std::vector<double>{sys.xt.values[idx] / sys.xt.grid[idx]};
      });
  const MeanSe ms = mean_se(column(results, 0));
  MCReport rep;
  rep.test = "strong_law";
  CheckRow row{"strong_law", exp.checkpoints.back(), ms.mean, ms.se, xi, exp.tol.z,
               false,        "Xt(T)/T"};
  row.pass = ms.se == 0.0 ? ms.mean == xi : std::abs(ms.mean - xi) <= exp.tol.z * ms.se;
  rep.pass = row.pass;
  rep.rows.push_back(std::move(row));
  finish(rep, exp, timer);
  return rep;
}

MCReport test_reflected_limit(const Experiment& exp) {
  exp.validate();
  if (!exp.reflection.enabled) throw ConfigError("reflected_limit: requires reflection");
  if (!integrand_nonnegative(exp.integrand))
    throw PreconditionError("reflected_limit: integrand must be nonnegative");
  const double xi = strong_law_rate(exp);
  const double target = std::max(0.0, -xi);  // -xi^-

  Timer timer;
  const auto results = run_replications(
      exp.replications, exp.threads, [&](std::uint64_t r) {
        const auto sys = realize_system(exp, r);
        const TimeGrid& grid = sys.xt.grid;
        const std::size_t idx = final_index(grid, exp);
        const double t = grid[idx];

        std::vector<double> phi_seg(sys.integrand.segments());
        for (std::size_t s = 0; s < phi_seg.size(); ++s)
          phi_seg[s] = exp.model.phi(sys.integrand.segment_level(s));
        const auto w_phi = per_interval_weights(sys.integrand, grid, phi_seg);
        const double v1 =
            simd::sum_exp_weighted(sys.refl->z.data(), w_phi.data(), idx, -1.0) / t;
        return std::vector<double>{v1, sys.refl->l[idx] / t};
      });

  MCReport rep;
  rep.test = "reflected_limit";
  const char* names[2] = {"(1/t) int phi(I) e^{-Z} ds", "L(t)/t"};
  for (std::size_t j = 0; j < 2; ++j) {
    const MeanSe ms = mean_se(column(results, j));
    CheckRow row{"reflected_limit", exp.checkpoints.back(), ms.mean, ms.se, target,
                 exp.tol.z,         false, names[j]};
    const double gap = std::abs(ms.mean - target);
    row.pass = gap <= std::max({exp.tol.reflected_rel * std::abs(target),
                                exp.tol.z * ms.se, exp.tol.reflected_abs});
    rep.rows.push_back(std::move(row));
  }
  rep.pass = rep.rows[0].pass && rep.rows[1].pass;
  finish(rep, exp, timer);
  return rep;
}

// ---------------------------------------------------------------------------

TestFn test_by_name(const std::string& name) {
  if (name == "zero_mean") return &test_zero_mean;
  if (name == "l2_identity") return &test_l2_identity;
  if (name == "rate_decay") return &test_rate_decay;
  if (name == "pk_limit") return &test_pk_limit;
  if (name == "compensation") return &test_compensation;
  if (name == "pasta") return &test_pasta;
  if (name == "strong_law") return &test_strong_law;
  if (name == "reflected_limit") return &test_reflected_limit;
  throw ConfigError("unknown test: " + name);
}

const std::vector<std::string>& all_test_names() {
  static const std::vector<std::string> names{
      "zero_mean", "l2_identity",  "rate_decay", "pk_limit",
      "compensation", "pasta", "strong_law", "reflected_limit"};
  return names;
}

void write_report_csv(std::span<const MCReport> reports, std::ostream& os,
                      bool with_timestamp) {
  if (with_timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "# generated " << buf << "\n";
  }
  os << "test,t,estimate,se,target,z,verdict\n";
  for (const auto& rep : reports)
    for (const auto& row : rep.rows)
      os << row.test << ',' << csv::fmt(row.t) << ',' << csv::fmt(row.estimate) << ','
         << csv::fmt(row.se) << ',' << csv::fmt(row.target) << ',' << csv::fmt(row.z)
         << ',' << (row.pass ? "pass" : "fail") << "\n";
}

}  // namespace levy
