#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "levy/config.hpp"
#include "levy/fixtures.hpp"

using namespace levy;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(LEVY_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[512];
  while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) output.append(buf, got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& leaf) {
  const fs::path d = fs::temp_directory_path() / leaf;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

constexpr std::string_view kMinimalConfig = R"({
  "seed": 1, "horizon": 5.0, "grid": {"dt": 0.1}, "replications": 4,
  "model": {"dim": 1, "drift": [-1.0], "covariance": [[0.0]],
            "jumps": [{"rate": 0.5, "law": {"type": "exponential", "coord": 0, "mu": 1.0}}]},
  "integrand": {"type": "constant", "levels": [1.0]},
  "reflection": {"enabled": true},
  "checkpoints": [5.0],
  "tests": {"zero_mean": {}}
})";

}  // namespace

TEST_CASE("minimal config parses into an experiment") {
  const auto cfg = parse_config(std::string(kMinimalConfig));
  CHECK(cfg.base.horizon == 5.0);
  CHECK(cfg.base.dt == 0.1);
  CHECK(cfg.base.replications == 4);
  CHECK(cfg.base.reflection.enabled);
  CHECK(cfg.base.model.dim() == 1);
  REQUIRE(cfg.tests.size() == 1);
  CHECK(cfg.tests[0].name == "zero_mean");
}

TEST_CASE("schema violations carry the offending key") {
  SUBCASE("unknown top-level key") {
    std::string text(kMinimalConfig);
    text.insert(text.rfind('}'), R"(, "bogus": 1)");
    CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("bogus"), ConfigError);
  }
  SUBCASE("negative rate names the key path") {
    std::string text(kMinimalConfig);
    const auto pos = text.find("\"rate\": 0.5");
    text.replace(pos, 11, "\"rate\": -0.5");
    CHECK_THROWS_WITH_AS(parse_config(text),
                         doctest::Contains("config.model.jumps[0].rate"), ConfigError);
  }
  SUBCASE("syntax errors are line-anchored") {
    std::string text(kMinimalConfig);
    text.insert(text.find("\"integrand\""), "garbage\n");
    CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("line "), ConfigError);
  }
  SUBCASE("unknown test name") {
    std::string text(kMinimalConfig);
    const auto pos = text.find("zero_mean");
    text.replace(pos, 9, "zzro_mean");
    CHECK_THROWS_AS(parse_config(text), ConfigError);
  }
  SUBCASE("reflection and explicit Y are exclusive") {
    std::string text(kMinimalConfig);
    text.insert(text.rfind('}'), R"(, "y": {"y0": 0.5})");
    CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("config.y"), ConfigError);
  }
}

TEST_CASE("approximate gamma-subordinator models parse and run") {
  constexpr std::string_view text = R"({
    "seed": 3, "horizon": 4.0, "grid": {"dt": 0.05}, "replications": 4,
    "allow_approximate": true,
    "model": {"type": "gamma_subordinator_approx", "a": 1.0, "b": 2.0, "eps": 1e-3},
    "integrand": {"type": "constant", "levels": [1.0]},
    "reflection": {"enabled": true},
    "checkpoints": [4.0],
    "tests": {"zero_mean": {}}
  })";
  const auto cfg = parse_config(std::string(text));
  CHECK_FALSE(cfg.base.model.exact());
  CHECK(cfg.base.allow_approximate);
  CHECK(test_zero_mean(cfg.tests[0].exp).replications == 4);
}

TEST_CASE("bundled fixtures are present and valid") {
  CHECK(fixtures().size() >= 5);
  for (const auto& f : fixtures()) {
    CAPTURE(f.name);
    CHECK_NOTHROW(parse_config(std::string(f.json_text)));
    CHECK(find_fixture(f.name) == &f);
    CHECK(find_fixture(std::string(f.name) + ".json") == &f);
  }
  const char* stable[] = {"mm1_pk", "brownian_pk", "transient_pk",
                          "mm_strong_law", "pasta_poisson"};
  for (const char* name : stable) CHECK(find_fixture(name) != nullptr);
}

TEST_CASE("shipped fixture files match the embedded configs") {
  for (const auto& f : fixtures()) {
    CAPTURE(f.name);
    const fs::path p = fs::path(LEVY_FIXTURE_DIR) / (std::string(f.name) + ".json");
    REQUIRE(fs::exists(p));
    std::string text = slurp(p);
    while (!text.empty() && text.back() == '\n') text.pop_back();
    CHECK(text == f.json_text);
  }
}

TEST_CASE("cli lists fixtures") {
  const auto res = run_cli("fixtures");
  CHECK(res.exit_code == 0);
  std::size_t count = 0;
  std::istringstream is(res.output);
  for (std::string line; std::getline(is, line);)
    count += !line.empty() && line[0] != ' ';
  CHECK(count >= 5);
  CHECK(res.output.find("mm1_pk") != std::string::npos);
}

TEST_CASE("cli run: exit codes") {
  const fs::path dir = temp_dir("levy_cli_exit");
  SUBCASE("passing run exits 0") {
    const auto res = run_cli("run mm1_pk --horizon 50 --reps 20 --out-dir " +
                             (dir / "ok").string());
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("PASS pk_limit") != std::string::npos);
  }
  SUBCASE("failing test exits 2") {
    // corrupted zero-mean control on a small run must fail
    const fs::path cfg = dir / "corrupt.json";
    std::string text(kMinimalConfig);
    text.replace(text.find(R"("zero_mean": {})"), 15,
                 R"("zero_mean": {"corrupt_term_phi": 1.5})");
    text.replace(text.find("\"horizon\": 5.0"), 14, "\"horizon\": 50.0");
    text.replace(text.find("[5.0]"), 5, "[50.0]");
    text.replace(text.find("\"replications\": 4"), 17, "\"replications\": 200");
    std::ofstream(cfg) << text;
    const auto res = run_cli("run " + cfg.string() + " --out-dir " +
                             (dir / "fail").string());
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("FAIL zero_mean") != std::string::npos);
  }
  SUBCASE("config errors exit 1") {
    const fs::path cfg = dir / "bad.json";
    std::ofstream(cfg) << "{ not json";
    const auto res = run_cli("run " + cfg.string());
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("error:") != std::string::npos);

    const auto missing = run_cli("run no_such_fixture");
    CHECK(missing.exit_code == 1);
  }
}

TEST_CASE("cli reruns are byte-identical, also across thread counts") {
  const fs::path dir = temp_dir("levy_cli_repro");
  const std::string base = "run mm1_pk --horizon 60 --reps 12 --no-timestamp ";
  const auto r1 = run_cli(base + "--out-dir " + (dir / "a").string());
  const auto r2 = run_cli(base + "--out-dir " + (dir / "b").string());
  const auto r3 = run_cli(base + "--threads 3 --deterministic-reduce --out-dir " +
                          (dir / "c").string());
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  REQUIRE(r3.exit_code == 0);
  const std::string a = slurp(dir / "a" / "report.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(dir / "b" / "report.csv"));
  CHECK(a == slurp(dir / "c" / "report.csv"));
}

TEST_CASE("cli seed precedence: flag beats environment beats config") {
  const fs::path dir = temp_dir("levy_cli_seed");
  const std::string tail = " --horizon 20 --reps 4 --out-dir " + dir.string();
  const auto from_env = [&](const std::string& extra) {
    return run_cli("run mm1_pk" + tail + extra);
  };
  setenv("LEVY_STORAGE_SEED", "424242", 1);
  const auto env_run = from_env("");
  CHECK(env_run.output.find("seed=424242") != std::string::npos);
  const auto flag_run = from_env(" --seed 171717");
  CHECK(flag_run.output.find("seed=171717") != std::string::npos);
  unsetenv("LEVY_STORAGE_SEED");
  const auto cfg_run = from_env("");
  CHECK(cfg_run.output.find("seed=20230901") != std::string::npos);
}

TEST_CASE("cli dumps optional CSVs") {
  const fs::path dir = temp_dir("levy_cli_dumps");
  const fs::path cfg = dir / "dump.json";
  std::string text(kMinimalConfig);
  text.insert(text.rfind('}'),
              R"(, "output": {"dir": ")" + (dir / "out").string() +
                  R"(", "timestamp": false, "dump_paths": true, )" +
                  R"("dump_reflected": true, "dump_decomposition": true})");
  std::ofstream(cfg) << text;
  const auto res = run_cli("run " + cfg.string());
  REQUIRE(res.exit_code == 0);
  CHECK(slurp(dir / "out" / "path.csv").starts_with("t,X_1,is_jump,dX_1"));
  CHECK(slurp(dir / "out" / "reflected.csv").starts_with("t,Xt,Z,L"));
  CHECK(slurp(dir / "out" / "decomposition.csv")
            .starts_with("t,term_phi,term_boundary,term_yc,term_jumps,M,"
                         "qv_cont,qv_jump,compensator"));
}
