#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "levy/config.hpp"
#include "levy/csv.hpp"
#include "levy/fixtures.hpp"
#include "levy/verify.hpp"

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<double> horizon;
  std::optional<double> dt;
  std::optional<int> threads;
  std::string out_dir;
  bool deterministic_reduce = false;  // reduction is always replication-ordered
  bool no_timestamp = false;
};

void apply_overrides(levy::Experiment& exp, const Overrides& ov) {
  if (ov.seed) exp.seeds.base_seed = *ov.seed;
  if (ov.reps) exp.replications = *ov.reps;
  if (ov.dt) exp.dt = *ov.dt;
  if (ov.threads) exp.threads = *ov.threads;
  if (ov.horizon) {
    exp.horizon = *ov.horizon;
    // clamp checkpoints into (0, horizon]
    std::vector<double> ck;
    for (const double c : exp.checkpoints)
      if (c <= exp.horizon) ck.push_back(c);
    if (ck.empty() || ck.back() < exp.horizon) ck.push_back(exp.horizon);
    exp.checkpoints = std::move(ck);
  }
}

levy::ParsedConfig resolve_config(const std::string& arg) {
  if (fs::exists(arg)) return levy::load_config_file(arg);
  if (const levy::Fixture* f = levy::find_fixture(arg))
    return levy::parse_config(std::string(f->json_text));
  throw levy::ConfigError("config '" + arg + "' is neither a file nor a bundled fixture");
}

void write_dumps(const levy::ParsedConfig& cfg, const fs::path& dir) {
  const auto& out = cfg.output;
  if (!out.dump_paths && !out.dump_reflected && !out.dump_decomposition) return;
  const levy::SystemRealization sys = levy::realize_system(cfg.base, 0);
  if (out.dump_paths) {
    std::ofstream os(dir / "path.csv");
    levy::dump_path_csv(sys.x, os);
  }
  if (out.dump_reflected && sys.refl) {
    std::ofstream os(dir / "reflected.csv");
    levy::dump_reflected_csv(sys.xt, *sys.refl, os);
  }
  if (out.dump_decomposition) {
    const auto ctx = sys.context();
    const auto m = levy::kw_martingale_real(ctx, cfg.base.checkpoints);
    const auto qv = levy::quadratic_variation(ctx, cfg.base.checkpoints);
    std::ofstream os(dir / "decomposition.csv");
    levy::dump_decomposition_csv(m, qv, os);
  }
}

int run_config(const std::string& config_arg, const Overrides& ov) {
  levy::ParsedConfig cfg = resolve_config(config_arg);
  apply_overrides(cfg.base, ov);
  for (auto& sel : cfg.tests) {
    apply_overrides(sel.exp, ov);
    sel.exp.validate();
  }
  if (!ov.out_dir.empty()) cfg.output.dir = ov.out_dir;
  if (ov.no_timestamp) cfg.output.timestamp = false;

  const fs::path dir(cfg.output.dir);
  fs::create_directories(dir);

  std::vector<levy::MCReport> reports;
  bool all_pass = true;
  for (const auto& sel : cfg.tests) {
    const levy::MCReport rep = levy::test_by_name(sel.name)(sel.exp);
    all_pass &= rep.pass;
    std::cout << (rep.pass ? "PASS" : "FAIL") << ' ' << rep.test;
    if (!rep.rows.empty()) {
      const auto& last = rep.rows.back();
      std::cout << "  t=" << levy::csv::fmt(last.t)
                << " estimate=" << levy::csv::fmt(last.estimate)
                << " target=" << levy::csv::fmt(last.target)
                << " se=" << levy::csv::fmt(last.se);
    }
    std::cout << "  seed=" << rep.base_seed << " reps=" << rep.replications
              << " runtime=" << levy::csv::fmt(rep.runtime_seconds) << "s\n";
    reports.push_back(rep);
  }

  {
    std::ofstream os(dir / "report.csv");
    if (!os) throw levy::ConfigError("cannot write to output dir: " + dir.string());
    levy::write_report_csv(reports, os, cfg.output.timestamp);
  }
  write_dumps(cfg, dir);

  return all_pass ? 0 : 2;
}

int list_fixtures(const std::string& export_dir) {
  for (const auto& f : levy::fixtures())
    std::cout << f.name << "\n    " << f.description << "\n";
  if (!export_dir.empty()) {
    fs::create_directories(export_dir);
    for (const auto& f : levy::fixtures()) {
      std::ofstream os(fs::path(export_dir) / (std::string(f.name) + ".json"));
      os << f.json_text << "\n";
    }
    std::cout << "exported " << levy::fixtures().size() << " fixtures to " << export_dir
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levy_storage: simulation and statistical verification of "
               "Levy-type storage processes and their Kella-Whitt martingales"};
  app.require_subcommand(1);

  std::string config_arg;
  Overrides ov;
  auto* run = app.add_subcommand("run", "run the tests selected by a config file");
  run->add_option("config", config_arg,
                  "config file path or bundled fixture name (see `fixtures`)")
      ->required();
  auto* seed_opt = run->add_option("--seed", "override the base seed");
  auto* reps_opt = run->add_option("--reps", "override the replication count");
  auto* horizon_opt = run->add_option(
      "--horizon", "override the horizon (checkpoints are clamped into it)");
  auto* dt_opt = run->add_option("--dt", "override the base grid step");
  auto* threads_opt =
      run->add_option("--threads", "worker threads (0 = hardware concurrency)");
  run->add_option("--out-dir", ov.out_dir, "output directory (default from config)");
  run->add_flag("--deterministic-reduce", ov.deterministic_reduce,
                "force replication-ordered reduction (always on; flag kept so "
                "scripts can be explicit)");
  run->add_flag("--no-timestamp", ov.no_timestamp,
                "omit the timestamp header from CSV outputs");

  std::string export_dir;
  auto* fixtures_cmd =
      app.add_subcommand("fixtures", "list bundled example configs");
  fixtures_cmd->add_option("--export", export_dir, "write the fixture JSON files here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fixtures_cmd->parsed()) return list_fixtures(export_dir);

    if (seed_opt->count()) ov.seed = seed_opt->as<std::uint64_t>();
    else if (const char* env = std::getenv("LEVY_STORAGE_SEED"))
      ov.seed = std::stoull(env);
    if (reps_opt->count()) ov.reps = reps_opt->as<std::size_t>();
    if (horizon_opt->count()) ov.horizon = horizon_opt->as<double>();
    if (dt_opt->count()) ov.dt = dt_opt->as<double>();
    if (threads_opt->count()) ov.threads = threads_opt->as<int>();
    return run_config(config_arg, ov);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
