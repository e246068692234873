#include <doctest.h>

#include <cmath>
#include <vector>

#include "levy/common.hpp"
#include "levy/grid.hpp"
#include "levy/rng.hpp"

using namespace levy;

TEST_CASE("streams are deterministic and label-separated") {
  SeedPolicy seeds{12345};
  Stream a(seeds.derive(0, "gauss"));
  Stream b(seeds.derive(0, "gauss"));
  Stream c(seeds.derive(0, "jump.0"));
  Stream d(seeds.derive(1, "gauss"));
  bool all_equal = true, any_equal_c = false, any_equal_d = false;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    all_equal &= va == b.next_u64();
    any_equal_c |= va == c.next_u64();
    any_equal_d |= va == d.next_u64();
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_c);
  CHECK_FALSE(any_equal_d);
}

TEST_CASE("uniform01 lands in (0, 1]") {
  Stream s(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform01();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("normal and exponential sampling moments") {
  Stream s(99);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));

  double esum = 0.0;
  for (int i = 0; i < n; ++i) esum += s.exponential(2.0);
  CHECK(esum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("regular grid spans [0, T]") {
  const TimeGrid g = TimeGrid::regular(1.0, 0.3);
  REQUIRE(g.size() == 5);
  CHECK(g[0] == 0.0);
  CHECK(g[4] == 1.0);
  CHECK(g[3] == doctest::Approx(0.9));

  const TimeGrid big = TimeGrid::regular(2000.0, 0.01);
  CHECK(big.size() == 200001);
  CHECK(big[big.size() - 1] == 2000.0);

  CHECK_THROWS_AS(TimeGrid::regular(-1.0, 0.1), InputError);
  CHECK_THROWS_AS(TimeGrid::regular(1.0, 0.0), InputError);
}

TEST_CASE("refine merges, dedups and validates") {
  const TimeGrid g = TimeGrid::from_points({0.0, 1.0});
  SUBCASE("empty refinement is a no-op") {
    const TimeGrid r = g.refined({});
    REQUIRE(r.size() == 2);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 1.0);
  }
  SUBCASE("inserts interior points") {
    const std::vector<double> extra{0.5};
    const TimeGrid r = g.refined(extra);
    REQUIRE(r.size() == 3);
    CHECK(r[1] == 0.5);
  }
  SUBCASE("deduplication is idempotent") {
    const std::vector<double> extra{0.5};
    const TimeGrid r = g.refined(extra).refined(extra);
    CHECK(r.size() == 3);
  }
  SUBCASE("near-coincident points merge") {
    const std::vector<double> extra{0.5, 0.5 + 1e-13};
    CHECK(g.refined(extra).size() == 3);
  }
  SUBCASE("outside the horizon is an input error") {
    const std::vector<double> bad{1.5};
    CHECK_THROWS_AS(g.refined(bad), InputError);
  }
}

TEST_CASE("grid lookups") {
  const TimeGrid g = TimeGrid::regular(1.0, 0.25);
  CHECK(g.index_of(0.5) == 2);
  CHECK(g.floor_index(0.6) == 2);
  CHECK(g.floor_index(1.0) == 4);
  CHECK_THROWS_AS(g.index_of(0.6), InputError);
  CHECK_THROWS_AS(g.floor_index(2.0), InputError);
}
