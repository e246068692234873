// Acceptance suite: end-to-end statistical checks of every verified claim,
// each with a pinned tolerance. Prints one PASS/FAIL line per criterion;
// exit code 0 iff all pass.
//
//  1-3  Pollaczek-Khinchine limits (M/M/1-type, reflected Brownian, transient)
//  4    zero mean of M(t) + corrupted-term negative control
//  5    L2 identity E M^2 = E int e^{-2Z} A ds
//  6    decay rate of median |M(t)/t|
//  7    Markov-modulated strong law and reflected limit
//  8    PASTA + anticipating negative control
//  9    deterministic hand-computed oracles, first-order quadrature
//  10   byte-identical reruns through the CLI

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "levy/config.hpp"
#include "levy/csv.hpp"
#include "levy/fixtures.hpp"
#include "levy/martingale.hpp"
#include "levy/verify.hpp"

using namespace levy;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << detail
            << std::endl;
  if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

LevyModel mm1_model() {
  std::vector<JumpComponent> jumps;
  jumps.push_back({0.5, JumpLaw::exponential(1, 0, 1.0)});
  return LevyModel({-1.0}, Matrix(1), std::move(jumps));
}

LevyModel brownian_model() {
  Matrix cov(1);
  cov(0, 0) = 1.0;
  return LevyModel({-1.0}, std::move(cov), {});
}

LevyModel transient_model() {
  std::vector<JumpComponent> jumps;
  jumps.push_back({1.5, JumpLaw::exponential(1, 0, 1.0)});
  return LevyModel({-1.0}, Matrix(1), std::move(jumps));
}

Experiment reflected_experiment(LevyModel model, double horizon, double dt,
                                std::size_t reps, std::uint64_t seed) {
  Experiment exp{std::move(model)};
  exp.integrand = ConstantIntegrand{{1.0}};
  exp.reflection.enabled = true;
  exp.horizon = horizon;
  exp.dt = dt;
  exp.checkpoints = {horizon};
  exp.replications = reps;
  exp.seeds.base_seed = seed;
  return exp;
}

// criteria 1-3: PK limits at T=2000, dt=0.01, N=50
void criterion_pk() {
  {
    const auto t0 = std::chrono::steady_clock::now();
    Experiment exp = reflected_experiment(mm1_model(), 2000.0, 0.01, 50, 101);
    exp.tol.pk_rel = 0.03;
    const auto rep = test_pk_limit(exp);
    const double secs = elapsed_s(t0);
    const auto& row = rep.rows[0];
    const double rel = std::abs(row.estimate - 2.0 / 3.0) / (2.0 / 3.0);
    report(1, rep.pass && rel <= 0.03 && secs <= 120.0,
           "PK limit, M/M/1-type: estimate " + csv::fmt(row.estimate) +
               " vs 2/3, rel err " + csv::fmt(rel) + ", runtime " + csv::fmt(secs) +
               "s (budget 120s)");
  }
  {
    Experiment exp = reflected_experiment(brownian_model(), 2000.0, 0.01, 50, 102);
    exp.tol.pk_rel = 0.03;
    const auto rep = test_pk_limit(exp);
    const auto& row = rep.rows[0];
    const double rel = std::abs(row.estimate - 2.0 / 3.0) / (2.0 / 3.0);
    // stationary Exp(2c/sigma^2) transform cross-check: theta/(theta+alpha)
    const double theta = 2.0;
    const double cross = theta / (theta + 1.0);
    const bool consistent = std::abs(row.target - cross) <= 1e-12;
    report(2, rep.pass && rel <= 0.03 && consistent,
           "PK limit, reflected Brownian: estimate " + csv::fmt(row.estimate) +
               " vs 2/3, rel err " + csv::fmt(rel) + "; stationary-transform target " +
               csv::fmt(cross) + (consistent ? " agrees" : " DISAGREES"));
  }
  {
    Experiment exp = reflected_experiment(transient_model(), 2000.0, 0.01, 50, 103);
    exp.tol.pk_abs = 0.02;
    const auto rep = test_pk_limit(exp);
    const auto& row = rep.rows[0];
    report(3, rep.pass && row.estimate <= 0.02,
           "transient case: time-average of e^{-Z} = " + csv::fmt(row.estimate) +
               " (limit 0, threshold 0.02)");
  }
}

// criterion 4: zero mean across fixtures 1-3 at {10,50,100}, N=2000, z=4,
// plus the corrupted negative control
void criterion_zero_mean() {
  const std::vector<double> ck{10.0, 50.0, 100.0};
  std::size_t npass = 0, total = 0;
  std::ostringstream detail;
  const LevyModel models[3] = {mm1_model(), brownian_model(), transient_model()};
  for (int f = 0; f < 3; ++f) {
    Experiment exp = reflected_experiment(models[f], 100.0, 0.01, 2000, 201 + f);
    exp.checkpoints = ck;
    const auto rep = test_zero_mean(exp);
    for (const auto& row : rep.rows) {
      ++total;
      npass += row.pass;
      detail << " |m|/se=" << csv::fmt(row.se > 0 ? std::abs(row.estimate) / row.se : 0.0);
    }
  }
  const bool fraction_ok =
      static_cast<double>(npass) >= 0.95 * static_cast<double>(total) - 1e-12;

  Experiment corrupted = reflected_experiment(mm1_model(), 100.0, 0.01, 2000, 201);
  corrupted.checkpoints = ck;
  corrupted.corrupt_term_phi = 1.1;
  const bool control_fails = !test_zero_mean(corrupted).pass;

  report(4, fraction_ok && control_fails,
         "zero mean: " + std::to_string(npass) + "/" + std::to_string(total) +
             " checkpoints within 4 SE;" + detail.str() +
             (control_fails ? "; corrupted control fails as required"
                            : "; corrupted control DID NOT fail"));
}

// criterion 5: L2 identity at t=100, N=2000, diffusion and jump fixtures
void criterion_l2() {
  bool all = true;
  std::ostringstream detail;
  detail << "L2 identity at t=100:";
  const LevyModel models[2] = {brownian_model(), mm1_model()};
  const char* names[2] = {"diffusion", "jump"};
  for (int f = 0; f < 2; ++f) {
    Experiment exp = reflected_experiment(models[f], 100.0, 0.01, 2000, 301 + f);
    exp.tol.l2_rel = 0.10;
    const auto rep = test_l2_identity(exp);
    const auto& row = rep.rows[0];
    const double rel =
        row.target != 0.0 ? std::abs(row.estimate - row.target) / std::abs(row.target)
                          : 0.0;
    all &= rep.pass && rel <= 0.10;
    detail << ' ' << names[f] << ": E[M^2]=" << csv::fmt(row.estimate)
           << " E[comp]=" << csv::fmt(row.target) << " rel gap " << csv::fmt(rel);
  }
  report(5, all, detail.str());
}

// criterion 6: rate decay slope over t in {10,...,1000}, N=500
void criterion_rate_decay() {
  Experiment exp = reflected_experiment(mm1_model(), 1000.0, 0.01, 500, 401);
  exp.checkpoints = {10.0, 30.0, 100.0, 300.0, 1000.0};
  exp.tol.slope_min = -0.65;
  exp.tol.slope_max = -0.35;
  const auto rep = test_rate_decay(exp);
  const double slope = rep.rows.back().estimate;
  report(6, rep.pass,
         "rate decay: log-log slope of median |M(t)/t| = " + csv::fmt(slope) +
             " in [-0.65, -0.35]");
}

// criterion 7: Markov-modulated strong law and reflected limit at T=5000
void criterion_strong_law() {
  Matrix cov(2);
  std::vector<JumpComponent> jumps;
  jumps.push_back({0.1, JumpLaw::exponential(2, 0, 1.0)});
  jumps.push_back({1.2, JumpLaw::exponential(2, 1, 1.0)});
  Experiment exp{LevyModel({-1.0, 0.0}, std::move(cov), std::move(jumps))};
  Matrix q(2);
  q(0, 0) = -1.0;
  q(0, 1) = 1.0;
  q(1, 0) = 2.0;
  q(1, 1) = -2.0;
  exp.integrand = MarkovModulatedIntegrand{q, 0, {{1.0, 0.0}, {0.0, 1.0}}};
  exp.reflection.enabled = true;
  exp.horizon = 5000.0;
  exp.dt = 0.01;
  exp.checkpoints = {5000.0};
  exp.replications = 50;
  exp.seeds.base_seed = 501;
  exp.tol.reflected_rel = 0.03;

  const auto sl = test_strong_law(exp);
  const auto rl = test_reflected_limit(exp);
  const double xi = strong_law_rate(exp);
  report(7, sl.pass && rl.pass && std::abs(xi + 0.2) < 1e-12,
         "strong law: X~(T)/T = " + csv::fmt(sl.rows[0].estimate) + " vs " +
             csv::fmt(xi) + " (4SE " + csv::fmt(4.0 * sl.rows[0].se) +
             "); reflected limit = " + csv::fmt(rl.rows[0].estimate) +
             " and L(T)/T = " + csv::fmt(rl.rows[1].estimate) + " vs 0.2");
}

// criterion 8: PASTA with the anticipating negative control
void criterion_pasta() {
  std::vector<JumpComponent> jumps;
  jumps.push_back({1.0, JumpLaw::exponential(1, 0, 2.0)});
  Experiment exp{LevyModel({-1.0}, Matrix(1), std::move(jumps))};
  exp.integrand = ConstantIntegrand{{1.0}};
  exp.reflection.enabled = true;
  exp.horizon = 2000.0;
  exp.dt = 0.01;
  exp.checkpoints = {2000.0};
  exp.replications = 50;
  exp.seeds.base_seed = 601;
  const auto rep = test_pasta(exp);

  Experiment control = exp;
  control.pasta_anticipating = true;
  const bool control_fails = !test_pasta(control).pass;
  report(8, rep.pass && control_fails,
         "PASTA: |arrival avg - time avg| = " + csv::fmt(std::abs(rep.rows[0].estimate)) +
             " (4SE " + csv::fmt(4.0 * rep.rows[0].se) + ")" +
             (control_fails ? "; anticipating control fails as required"
                            : "; anticipating control DID NOT fail"));
}

// criterion 9: deterministic hand oracles and the first-order quadrature check
void criterion_oracles() {
  const double kHandM = 0.19978820044686402;   // single-jump path, t = 1
  const double kHandQv = 0.39957640089372804;  // e^0 (1 - e^{-1})^2

  const auto eval_single_jump = [&](double dt) {
    std::vector<JumpComponent> jumps;
    jumps.push_back({1.0, JumpLaw::point_mass({1.0})});
    const LevyModel model({0.0}, Matrix(1), std::move(jumps));
    const std::vector<double> half{0.5};
    TimeGrid grid = TimeGrid::regular(1.0, dt).refined(half);
    const std::size_t j = grid.floor_index(0.5);
    std::vector<std::vector<double>> values(1, std::vector<double>(grid.size(), 0.0));
    for (std::size_t i = j; i < grid.size(); ++i) values[0][i] = 1.0;
    std::vector<JumpRecord> recs;
    recs.push_back({grid[j], j, {1.0}, {0.0}});
    const SamplePath x(std::move(grid), 1, std::move(values), std::move(recs));
    const RealizedIntegrand one(1, 1.0, {}, {{1.0}});
    const auto xt = stochastic_integral(one, model, x);
    const auto ctx = make_context_explicit(model, one, xt, FiniteVariationSpec{});
    const std::vector<double> ck{1.0};
    const auto m = kw_martingale_real(ctx, ck);
    const auto qv = quadratic_variation(ctx, ck);
    return std::pair{m.total[0], qv.jump_qv[0]};
  };

  const auto [m_val, qv_val] = eval_single_jump(1e-4);
  const bool hand_ok =
      std::abs(m_val - kHandM) <= 1e-6 && std::abs(qv_val - kHandQv) <= 1e-6;

  // first-order check on a path with a genuine O(dt) residual: the
  // deterministic drift path telescopes to M(t) = O(dt)
  const auto drift_residual = [](double dt) {
    const LevyModel m({2.0}, Matrix(1), {});
    const RealizedIntegrand alpha(1, 1.0, {}, {{0.7}});
    const auto x = simulate_levy(m, TimeGrid::regular(1.0, dt), SeedPolicy{0}, 0);
    const auto xt = stochastic_integral(alpha, m, x);
    FiniteVariationSpec y;
    y.y0 = 0.4;
    const auto ctx = make_context_explicit(m, alpha, xt, y);
    const std::vector<double> ck{1.0};
    return std::abs(kw_martingale_real(ctx, ck).total[0]);
  };
  const double r1 = drift_residual(1e-4);
  const double r2 = drift_residual(5e-5);
  const double ratio = r1 / r2;
  const bool order_ok = ratio >= 1.6 && ratio <= 2.4;

  report(9, hand_ok && order_ok,
         "hand oracles: M(1) = " + csv::fmt(m_val) + " (target 0.19978820), jump QV = " +
             csv::fmt(qv_val) + " (target 0.39957640); halving dt scales the drift-path "
             "residual by " + csv::fmt(ratio) + " (expect ~2)");
}

// criterion 10: byte-identical CSV reruns through the CLI, incl. threads > 1
void criterion_reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "levy_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const auto run = [&](const std::string& extra, const std::string& sub) {
    const std::string cmd = std::string(LEVY_CLI_PATH) +
                            " run mm1_pk --horizon 200 --reps 16 --no-timestamp " +
                            extra + " --out-dir " + (dir / sub).string() +
                            " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  const bool ok = run("", "a") && run("", "b") &&
                  run("--threads 3 --deterministic-reduce", "c");
  const std::string a = slurp(dir / "a" / "report.csv");
  const bool identical =
      ok && !a.empty() && a == slurp(dir / "b" / "report.csv") &&
      a == slurp(dir / "c" / "report.csv");
  report(10, identical,
         std::string("reproducibility: rerun and threaded report.csv are ") +
             (identical ? "byte-identical" : "DIFFERENT"));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_pk();
  criterion_zero_mean();
  criterion_l2();
  criterion_rate_decay();
  criterion_strong_law();
  criterion_pasta();
  criterion_oracles();
  criterion_reproducibility();
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT")
            << " (total runtime " << csv::fmt(elapsed_s(t0)) << "s)" << std::endl;
  return g_failures == 0 ? 0 : 1;
}
