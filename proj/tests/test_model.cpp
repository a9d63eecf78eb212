#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "kitaev/model.hpp"

using namespace kitaev;

TEST_CASE("grid for N=8 has q = pi/8 and 3pi/8") {
  const auto grid = momentum_grid(8);
  REQUIRE(grid.size() == 2);
  CHECK(grid[0].q == doctest::Approx(kPi / 8).epsilon(1e-15));
  CHECK(grid[1].q == doctest::Approx(3 * kPi / 8).epsilon(1e-15));
  CHECK(grid[0].index_m == 1);
  CHECK(grid[1].index_m == 2);
}

TEST_CASE("grid for N=32 starts at pi/N and its eighth quartet sits at 15pi/N") {
  const auto grid = momentum_grid(32);
  REQUIRE(grid.size() == 8);
  CHECK(grid.front().q == doctest::Approx(kPi / 32));
  CHECK(grid[7].q == doctest::Approx(15 * kPi / 32));
}

TEST_CASE("grid rejects lengths that are not multiples of 4 or below 8") {
  CHECK_THROWS_AS(momentum_grid(6), std::invalid_argument);
  CHECK_THROWS_AS(momentum_grid(10), std::invalid_argument);
  CHECK_THROWS_AS(momentum_grid(4), std::invalid_argument);
  CHECK_THROWS_AS(momentum_grid(0), std::invalid_argument);
}

TEST_CASE("grid partners cover N distinct allowed momenta and are closed under k->-k, k->pi-k") {
  for (int n : {8, 12, 32, 100}) {
    const auto grid = momentum_grid(n);
    CHECK(grid.size() == static_cast<std::size_t>(n / 4));
    std::vector<double> all;
    for (const auto& quartet : grid) {
      CHECK(quartet.q > 0.0);
      CHECK(quartet.q < kPi / 2);
      for (double k : quartet.partners) all.push_back(reduce_momentum(k));
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i] - all[i - 1] > 1e-9);
    CHECK(all.size() == static_cast<std::size_t>(n));
    const auto contains = [&](double k) {
      const double kr = reduce_momentum(k);
      return std::any_of(all.begin(), all.end(), [&](double x) { return std::abs(x - kr) < 1e-12; });
    };
    for (double k : all) {
      CHECK(contains(-k));
      CHECK(contains(kPi - k));
      const double odd = k * n / kPi;
      CHECK(std::abs(odd - std::round(odd)) < 1e-9);
      CHECK(std::lround(odd) % 2 != 0);
    }
    CHECK(allowed_momenta(n) == all);
  }
}

TEST_CASE("locate_momentum round-trips every allowed momentum") {
  for (int n : {8, 16, 32}) {
    const auto grid = momentum_grid(n);
    for (std::size_t m = 0; m < grid.size(); ++m) {
      for (Slot s : kAllSlots) {
        const double k = grid[m].momentum(s);
        const MomentumSlot ms = locate_momentum(n, k);
        CHECK(ms.quartet == static_cast<int>(m));
        CHECK(ms.slot == s);
        CHECK(momentum_of(n, ms) == doctest::Approx(k));
        CHECK(locate_momentum(n, k + 2 * kPi) == ms);
      }
    }
  }
  CHECK_THROWS_AS(locate_momentum(8, 2 * kPi / 8), std::invalid_argument);
  CHECK_THROWS_AS(locate_momentum(8, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(locate_momentum(6, kPi / 6), std::invalid_argument);
}

TEST_CASE("reduce_momentum maps into (-pi, pi]") {
  CHECK(reduce_momentum(kPi) == doctest::Approx(kPi));
  CHECK(reduce_momentum(-kPi) == doctest::Approx(kPi));
  CHECK(reduce_momentum(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(reduce_momentum(0.25) == doctest::Approx(0.25));
}

TEST_CASE("ChainSpec validation") {
  CHECK_NOTHROW(ChainSpec{8, 1.0, 0.5, 0.3}.validate());
  CHECK_THROWS_AS((ChainSpec{6, 1.0, 1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ChainSpec{8, 0.0, 1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ChainSpec{8, 1.0, NAN, 0.0}.validate()), std::invalid_argument);
  const ChainSpec s{16, 2.0, 0.5, 0.1};
  CHECK(s.j_y() == doctest::Approx(1.0));
  CHECK(s.with_field(-3.0).h == -3.0);
  CHECK(s.with_field(-3.0).n_sites == 16);
}

TEST_CASE("mode spectrum closed-form examples") {
  const ModeQuartet quartet{1, kPi / 3, {kPi / 3 - kPi, -kPi / 3, kPi / 3, kPi - kPi / 3}};
  SUBCASE("r=1 gives theta_q = 0") {
    const auto sp = mode_spectrum(ChainSpec{8, 1.0, 1.0, 0.4}, quartet);
    CHECK(sp.theta_q == 0.0);
  }
  SUBCASE("h=0 at q=pi/3") {
    const auto sp = mode_spectrum(ChainSpec{8, 1.0, 1.0, 0.0}, quartet);
    CHECK(sp.abs_e == doctest::Approx(0.5));
    CHECK(sp.lambdas[0] == doctest::Approx(-1.0));
    CHECK(sp.lambdas[1] == doctest::Approx(0.0));
    CHECK(sp.lambdas[2] == doctest::Approx(0.0));
    CHECK(sp.lambdas[3] == doctest::Approx(1.0));
    CHECK(sp.degenerate);
  }
  SUBCASE("h=1 at q=pi/3") {
    const auto sp = mode_spectrum(ChainSpec{8, 1.0, 1.0, 1.0}, quartet);
    const double root = std::sqrt(1.25);
    CHECK(sp.lambdas[0] == doctest::Approx(-0.5 - root));
    CHECK(sp.lambdas[1] == doctest::Approx(0.5 - root));
    CHECK(sp.lambdas[2] == doctest::Approx(-0.5 + root));
    CHECK(sp.lambdas[3] == doctest::Approx(0.5 + root));
    CHECK_FALSE(sp.degenerate);
    for (int i = 0; i < 4; ++i) CHECK(sp.h_over_lambda[i] == doctest::Approx(1.0 / sp.lambdas[i]));
  }
}

TEST_CASE("mode spectrum invariants over random parameters") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(-2.0, 3.0);
  std::uniform_real_distribution<double> uq(0.01, kPi / 2 - 0.01);
  for (int trial = 0; trial < 100; ++trial) {
    const double r = ur(rng);
    const double h = ur(rng);
    const double jx = 0.5 + std::abs(ur(rng));
    const double q = uq(rng);
    const ModeQuartet quartet{1, q, {q - kPi, -q, q, kPi - q}};
    const ChainSpec spec{8, jx, r, h};
    const auto sp = mode_spectrum(spec, quartet);
    const double sum = sp.lambdas[0] + sp.lambdas[1] + sp.lambdas[2] + sp.lambdas[3];
    CHECK(std::abs(sum) <= 1e-12);
    CHECK(std::abs(sp.lambdas[0] + sp.lambdas[3]) <= 1e-12);
    CHECK(std::abs(sp.lambdas[1] + sp.lambdas[2]) <= 1e-12);
    CHECK(std::is_sorted(sp.lambdas.begin(), sp.lambdas.end()));
    const double jy = r * jx;
    const double expected_e =
        0.5 * std::sqrt(std::pow((jx + jy) * std::cos(q), 2) + std::pow((jx - jy) * std::sin(q), 2));
    CHECK(std::abs(sp.abs_e - expected_e) <= 1e-12);
    const double theta = std::asin((1 - r) * std::sin(q) /
                                   std::sqrt(std::pow((1 + r) * std::cos(q), 2) +
                                             std::pow((1 - r) * std::sin(q), 2)));
    CHECK(std::abs(sp.theta_q - theta) <= 1e-12);
  }
}
