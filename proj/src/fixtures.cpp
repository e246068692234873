#include "levy/fixtures.hpp"

#include <array>

namespace levy {

namespace {

constexpr std::string_view kMm1Pk = R"({
  "seed": 20230901,
  "horizon": 2000.0,
  "grid": {"dt": 0.01},
  "replications": 50,
  "model": {
    "dim": 1,
    "drift": [-1.0],
    "covariance": [[0.0]],
    "jumps": [{"rate": 0.5, "law": {"type": "exponential", "coord": 0, "mu": 1.0}}]
  },
  "integrand": {"type": "constant", "levels": [1.0]},
  "reflection": {"enabled": true, "z0": 0.0, "bridge": "auto"},
  "checkpoints": [2000.0],
  "tolerances": {"z": 4.0, "pk_rel": 0.03},
  "tests": {"pk_limit": {}}
})";

constexpr std::string_view kBrownianPk = R"({
  "seed": 20230902,
  "horizon": 2000.0,
  "grid": {"dt": 0.01},
  "replications": 50,
  "model": {"dim": 1, "drift": [-1.0], "covariance": [[1.0]], "jumps": []},
  "integrand": {"type": "constant", "levels": [1.0]},
  "reflection": {"enabled": true, "z0": 0.0, "bridge": "auto"},
  "checkpoints": [2000.0],
  "tolerances": {"z": 4.0, "pk_rel": 0.03},
  "tests": {"pk_limit": {}}
})";

constexpr std::string_view kTransientPk = R"({
  "seed": 20230903,
  "horizon": 2000.0,
  "grid": {"dt": 0.01},
  "replications": 50,
  "model": {
    "dim": 1,
    "drift": [-1.0],
    "covariance": [[0.0]],
    "jumps": [{"rate": 1.5, "law": {"type": "exponential", "coord": 0, "mu": 1.0}}]
  },
  "integrand": {"type": "constant", "levels": [1.0]},
  "reflection": {"enabled": true, "z0": 0.0, "bridge": "auto"},
  "checkpoints": [2000.0],
  "tolerances": {"z": 4.0, "pk_abs": 0.02},
  "tests": {"pk_limit": {}}
})";

constexpr std::string_view kMmStrongLaw = R"({
  "seed": 20230904,
  "horizon": 5000.0,
  "grid": {"dt": 0.01},
  "replications": 50,
  "model": {
    "dim": 2,
    "drift": [-1.0, 0.0],
    "covariance": [[0.0, 0.0], [0.0, 0.0]],
    "jumps": [
      {"rate": 0.1, "law": {"type": "exponential", "coord": 0, "mu": 1.0}},
      {"rate": 1.2, "law": {"type": "exponential", "coord": 1, "mu": 1.0}}
    ]
  },
  "integrand": {
    "type": "markov_modulated",
    "q": [[-1.0, 1.0], [2.0, -2.0]],
    "initial_state": 0,
    "level_map": [[1.0, 0.0], [0.0, 1.0]]
  },
  "reflection": {"enabled": true, "z0": 0.0, "bridge": "auto"},
  "checkpoints": [5000.0],
  "tolerances": {"z": 4.0, "reflected_rel": 0.03},
  "tests": {"strong_law": {}, "reflected_limit": {}}
})";

constexpr std::string_view kPastaPoisson = R"({
  "seed": 20230905,
  "horizon": 2000.0,
  "grid": {"dt": 0.01},
  "replications": 50,
  "model": {
    "dim": 1,
    "drift": [-1.0],
    "covariance": [[0.0]],
    "jumps": [{"rate": 1.0, "law": {"type": "exponential", "coord": 0, "mu": 2.0}}]
  },
  "integrand": {"type": "constant", "levels": [1.0]},
  "reflection": {"enabled": true, "z0": 0.0, "bridge": "auto"},
  "checkpoints": [2000.0],
  "tolerances": {"z": 4.0},
  "tests": {"pasta": {"observer": 0}}
})";

constexpr std::string_view kRateDecayMm1 = R"({
  "seed": 20230906,
  "horizon": 1000.0,
  "grid": {"dt": 0.01},
  "replications": 500,
  "model": {
    "dim": 1,
    "drift": [-1.0],
    "covariance": [[0.0]],
    "jumps": [{"rate": 0.5, "law": {"type": "exponential", "coord": 0, "mu": 1.0}}]
  },
  "integrand": {"type": "constant", "levels": [1.0]},
  "reflection": {"enabled": true, "z0": 0.0, "bridge": "auto"},
  "checkpoints": [10.0, 30.0, 100.0, 300.0, 1000.0],
  "tolerances": {"z": 4.0, "slope_min": -0.65, "slope_max": -0.35},
  "tests": {"rate_decay": {}}
})";

constexpr std::array<Fixture, 6> kFixtures{{
    {"mm1_pk",
     "M/M/1-type workload: CP(0.5, Exp(1)) minus unit drift, reflected; "
     "Pollaczek-Khinchine limit target 2/3",
     kMm1Pk},
    {"brownian_pk",
     "reflected Brownian motion, drift -1, sigma^2 = 1; PK limit target 2/3 "
     "(= stationary Exp(2) transform)",
     kBrownianPk},
    {"transient_pk",
     "transient input CP(1.5, Exp(1)) minus unit drift; time-average of "
     "e^{-Z} tends to 0",
     kTransientPk},
    {"mm_strong_law",
     "Markov-modulated 2-state input (q12=1, q21=2, means -0.9/+1.2); strong "
     "law X~(T)/T -> -0.2 and reflected limit 0.2",
     kMmStrongLaw},
    {"pasta_poisson",
     "Poisson(1) arrivals observing the reflected workload they drive; "
     "arrival average equals time average",
     kPastaPoisson},
    {"rate_decay_mm1",
     "median |M(t)/t| decay on the M/M/1-type fixture; log-log slope near "
     "-1/2",
     kRateDecayMm1},
}};

}  // namespace

std::span<const Fixture> fixtures() { return kFixtures; }

const Fixture* find_fixture(std::string_view name) {
  if (name.ends_with(".json")) name.remove_suffix(5);
  for (const auto& f : kFixtures)
    if (f.name == name) return &f;
  return nullptr;
}

}  // namespace levy
