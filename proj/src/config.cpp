#include "levy/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace levy {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) fail(path + "." + key, "missing");
  if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

double get_number_or(const json& obj, const std::string& path, const std::string& key,
                     double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

std::uint64_t get_uint_or(const json& obj, const std::string& path,
                          const std::string& key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer() && !obj[key].is_number_unsigned())
    fail(path + "." + key, "expected an integer");
  return obj[key].get<std::uint64_t>();
}

bool get_bool_or(const json& obj, const std::string& path, const std::string& key,
                 bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) fail(path + "." + key, "expected a boolean");
  return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) fail(path + "." + key, "missing");
  if (!obj[key].is_string()) fail(path + "." + key, "expected a string");
  return obj[key].get<std::string>();
}

std::vector<double> get_vector(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(path, "expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Matrix get_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a square matrix (array of rows)");
  const std::size_t n = v.size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = get_vector(v[i], path + "[" + std::to_string(i) + "]");
    if (row.size() != n) fail(path, "matrix is not square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = row[j];
  }
  return m;
}

JumpLaw parse_law(const json& v, const std::string& path, std::size_t dim) {
  check_keys(v, path, {"type", "atom", "coord", "mu", "a", "b", "weights", "atoms"});
  const std::string type = get_string(v, path, "type");
  if (type == "point_mass") {
    auto atom = get_vector(v.at("atom"), path + ".atom");
    if (atom.size() != dim) fail(path + ".atom", "length != model dim");
    return JumpLaw::point_mass(std::move(atom));
  }
  if (type == "exponential") {
    const auto coord = static_cast<std::size_t>(get_number(v, path, "coord"));
    const double mu = get_number(v, path, "mu");
    if (!(mu > 0.0)) fail(path + ".mu", "must be positive");
    return JumpLaw::exponential(dim, coord, mu);
  }
  if (type == "uniform") {
    const auto coord = static_cast<std::size_t>(get_number(v, path, "coord"));
    return JumpLaw::uniform(dim, coord, get_number(v, path, "a"),
                            get_number(v, path, "b"));
  }
  if (type == "mixture") {
    auto weights = get_vector(v.at("weights"), path + ".weights");
    if (!v.contains("atoms") || !v["atoms"].is_array()) fail(path + ".atoms", "missing");
    std::vector<std::vector<double>> atoms;
    for (std::size_t i = 0; i < v["atoms"].size(); ++i)
      atoms.push_back(
          get_vector(v["atoms"][i], path + ".atoms[" + std::to_string(i) + "]"));
    return JumpLaw::mixture(std::move(weights), std::move(atoms));
  }
  fail(path + ".type", "unknown jump law '" + type + "'");
}

LevyModel parse_model(const json& v, const std::string& path) {
  if (v.contains("type")) {
    check_keys(v, path, {"type", "a", "b", "eps", "bins_per_decade"});
    const std::string type = get_string(v, path, "type");
    if (type != "gamma_subordinator_approx")
      fail(path + ".type", "unknown model type '" + type + "'");
    return gamma_subordinator_approx(
        get_number(v, path, "a"), get_number(v, path, "b"), get_number(v, path, "eps"),
        static_cast<std::size_t>(get_uint_or(v, path, "bins_per_decade", 8)));
  }
  check_keys(v, path, {"dim", "drift", "covariance", "jumps"});
  const auto dim = static_cast<std::size_t>(get_number(v, path, "dim"));
  auto drift = get_vector(v.at("drift"), path + ".drift");
  if (drift.size() != dim) fail(path + ".drift", "length != dim");
  Matrix cov = get_matrix(v.at("covariance"), path + ".covariance");
  if (cov.size() != dim) fail(path + ".covariance", "size != dim");
  std::vector<JumpComponent> jumps;
  if (v.contains("jumps")) {
    if (!v["jumps"].is_array()) fail(path + ".jumps", "expected an array");
    for (std::size_t i = 0; i < v["jumps"].size(); ++i) {
      const std::string jpath = path + ".jumps[" + std::to_string(i) + "]";
      const auto& jv = v["jumps"][i];
      check_keys(jv, jpath, {"rate", "law"});
      const double rate = get_number(jv, jpath, "rate");
      if (!(rate > 0.0)) fail(jpath + ".rate", "must be positive");
      if (!jv.contains("law")) fail(jpath + ".law", "missing");
      jumps.push_back({rate, parse_law(jv["law"], jpath + ".law", dim)});
    }
  }
  try {
    return LevyModel(std::move(drift), std::move(cov), std::move(jumps));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

IntegrandSpec parse_integrand(const json& v, const std::string& path, std::size_t dim) {
  check_keys(v, path,
             {"type", "levels", "breakpoints", "q", "initial_state", "level_map"});
  const std::string type = get_string(v, path, "type");
  if (type == "constant") {
    auto levels = get_vector(v.at("levels"), path + ".levels");
    if (levels.size() != dim) fail(path + ".levels", "length != model dim");
    return ConstantIntegrand{std::move(levels)};
  }
  if (type == "piecewise") {
    PiecewiseIntegrand p;
    p.breakpoints = get_vector(v.at("breakpoints"), path + ".breakpoints");
    if (!v.contains("levels") || !v["levels"].is_array())
      fail(path + ".levels", "missing");
    for (std::size_t i = 0; i < v["levels"].size(); ++i)
      p.levels.push_back(
          get_vector(v["levels"][i], path + ".levels[" + std::to_string(i) + "]"));
    if (p.levels.size() != p.breakpoints.size() + 1)
      fail(path + ".levels", "need breakpoints+1 level vectors");
    return p;
  }
  if (type == "markov_modulated") {
    MarkovModulatedIntegrand mm;
    mm.q = get_matrix(v.at("q"), path + ".q");
    mm.initial_state = static_cast<std::size_t>(get_number(v, path, "initial_state"));
    if (!v.contains("level_map") || !v["level_map"].is_array())
      fail(path + ".level_map", "missing");
    for (std::size_t i = 0; i < v["level_map"].size(); ++i)
      mm.level_map.push_back(
          get_vector(v["level_map"][i], path + ".level_map[" + std::to_string(i) + "]"));
    return mm;
  }
  fail(path + ".type", "unknown integrand '" + type + "'");
}

void parse_tolerances(const json& v, const std::string& path, Tolerances& tol) {
  check_keys(v, path,
             {"z", "pk_rel", "pk_abs", "l2_rel", "reflected_rel", "reflected_abs",
              "slope_min", "slope_max", "pass_fraction"});
  tol.z = get_number_or(v, path, "z", tol.z);
  tol.pk_rel = get_number_or(v, path, "pk_rel", tol.pk_rel);
  tol.pk_abs = get_number_or(v, path, "pk_abs", tol.pk_abs);
  tol.l2_rel = get_number_or(v, path, "l2_rel", tol.l2_rel);
  tol.reflected_rel = get_number_or(v, path, "reflected_rel", tol.reflected_rel);
  tol.reflected_abs = get_number_or(v, path, "reflected_abs", tol.reflected_abs);
  tol.slope_min = get_number_or(v, path, "slope_min", tol.slope_min);
  tol.slope_max = get_number_or(v, path, "slope_max", tol.slope_max);
  tol.pass_fraction = get_number_or(v, path, "pass_fraction", tol.pass_fraction);
}

FiniteVariationSpec parse_y(const json& v, const std::string& path) {
  check_keys(v, path, {"y0", "nodes", "jumps"});
  FiniteVariationSpec y;
  y.y0 = get_number_or(v, path, "y0", 0.0);
  if (v.contains("nodes")) {
    if (!v["nodes"].is_array()) fail(path + ".nodes", "expected [[t, value], ...]");
    y.node_times.clear();
    y.node_values.clear();
    for (const auto& nv : v["nodes"]) {
      const auto pair = get_vector(nv, path + ".nodes");
      if (pair.size() != 2) fail(path + ".nodes", "expected [t, value] pairs");
      y.node_times.push_back(pair[0]);
      y.node_values.push_back(pair[1]);
    }
  }
  if (v.contains("jumps")) {
    if (!v["jumps"].is_array()) fail(path + ".jumps", "expected [[t, dy], ...]");
    for (const auto& jv : v["jumps"]) {
      const auto pair = get_vector(jv, path + ".jumps");
      if (pair.size() != 2) fail(path + ".jumps", "expected [t, dy] pairs");
      y.jumps.push_back({pair[0], pair[1]});
    }
  }
  return y;
}

Experiment::AProcess parse_a_process(const std::string& s, const std::string& path) {
  if (s == "const_one") return Experiment::AProcess::const_one;
  if (s == "sinusoid") return Experiment::AProcess::sinusoid;
  if (s == "exp_neg_z_indep") return Experiment::AProcess::exp_neg_z_indep;
  fail(path, "unknown a_process '" + s + "'");
}

}  // namespace

ParsedConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    // convert the byte offset into a line number
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < json_text.size(); ++i)
      if (json_text[i] == '\n') ++line;
    throw ConfigError("line " + std::to_string(line) + ": " + e.what());
  }

  check_keys(root, "config",
             {"model", "integrand", "reflection", "horizon", "grid", "tests", "output",
              "seed", "checkpoints", "replications", "threads", "tolerances", "y",
              "allow_approximate"});

  if (!root.contains("model")) fail("config.model", "missing");
  LevyModel model = parse_model(root["model"], "config.model");

  if (!root.contains("integrand")) fail("config.integrand", "missing");
  IntegrandSpec integrand =
      parse_integrand(root["integrand"], "config.integrand", model.dim());

  Experiment base{std::move(model)};
  base.integrand = std::move(integrand);
  base.horizon = get_number(root, "config", "horizon");
  if (!root.contains("grid")) fail("config.grid", "missing");
  check_keys(root["grid"], "config.grid", {"dt"});
  base.dt = get_number(root["grid"], "config.grid", "dt");
  base.replications =
      static_cast<std::size_t>(get_uint_or(root, "config", "replications", 2));
  base.seeds.base_seed = get_uint_or(root, "config", "seed", 0);
  base.threads = static_cast<int>(get_uint_or(root, "config", "threads", 0));
  base.allow_approximate = get_bool_or(root, "config", "allow_approximate", false);
  if (root.contains("checkpoints"))
    base.checkpoints = get_vector(root["checkpoints"], "config.checkpoints");
  else
    base.checkpoints = {base.horizon};

  if (root.contains("reflection")) {
    const auto& rv = root["reflection"];
    check_keys(rv, "config.reflection", {"enabled", "z0", "bridge"});
    base.reflection.enabled = get_bool_or(rv, "config.reflection", "enabled", true);
    base.reflection.z0 = get_number_or(rv, "config.reflection", "z0", 0.0);
    if (rv.contains("bridge")) {
      const std::string b = get_string(rv, "config.reflection", "bridge");
      if (b == "auto") base.reflection.bridge = ReflectionSettings::Bridge::automatic;
      else if (b == "on") base.reflection.bridge = ReflectionSettings::Bridge::on;
      else if (b == "off") base.reflection.bridge = ReflectionSettings::Bridge::off;
      else fail("config.reflection.bridge", "expected auto|on|off");
    }
  }
  if (root.contains("y")) {
    if (base.reflection.enabled)
      fail("config.y", "exclusive with reflection.enabled");
    base.y_spec = parse_y(root["y"], "config.y");
  }
  if (root.contains("tolerances"))
    parse_tolerances(root["tolerances"], "config.tolerances", base.tol);

  ParsedConfig out{std::move(base), {}, {}};

  if (root.contains("output")) {
    const auto& ov = root["output"];
    check_keys(ov, "config.output",
               {"dir", "timestamp", "dump_paths", "dump_reflected", "dump_decomposition"});
    if (ov.contains("dir")) out.output.dir = get_string(ov, "config.output", "dir");
    out.output.timestamp = get_bool_or(ov, "config.output", "timestamp", true);
    out.output.dump_paths = get_bool_or(ov, "config.output", "dump_paths", false);
    out.output.dump_reflected = get_bool_or(ov, "config.output", "dump_reflected", false);
    out.output.dump_decomposition =
        get_bool_or(ov, "config.output", "dump_decomposition", false);
  }

  if (!root.contains("tests")) fail("config.tests", "missing");
  if (!root["tests"].is_object()) fail("config.tests", "expected an object");
  for (const auto& [name, tv] : root["tests"].items()) {
    const std::string tpath = "config.tests." + name;
    test_by_name(name);  // unknown test -> ConfigError
    check_keys(tv, tpath,
               {"checkpoints", "replications", "corrupt_term_phi", "anticipating",
                "observer", "a_process", "tolerances"});
    Experiment exp = out.base;
    if (tv.contains("checkpoints"))
      exp.checkpoints = get_vector(tv["checkpoints"], tpath + ".checkpoints");
    exp.replications = static_cast<std::size_t>(
        get_uint_or(tv, tpath, "replications", exp.replications));
    exp.corrupt_term_phi = get_number_or(tv, tpath, "corrupt_term_phi", 1.0);
    exp.pasta_anticipating = get_bool_or(tv, tpath, "anticipating", false);
    exp.pasta_observer =
        static_cast<std::size_t>(get_uint_or(tv, tpath, "observer", 0));
    if (tv.contains("a_process"))
      exp.a_process =
          parse_a_process(get_string(tv, tpath, "a_process"), tpath + ".a_process");
    if (tv.contains("tolerances"))
      parse_tolerances(tv["tolerances"], tpath + ".tolerances", exp.tol);
    exp.validate();
    out.tests.push_back({name, std::move(exp)});
  }
  if (out.tests.empty()) fail("config.tests", "no tests selected");
  return out;
}

ParsedConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace levy
