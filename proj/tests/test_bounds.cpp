#include <cmath>
#include <random>

#include "doctest.h"
#include "lrlab/bounds.hpp"
#include "lrlab/errors.hpp"
#include "oracles.hpp"

using namespace lrlab;

TEST_CASE("constant validation") {
  CHECK_THROWS_AS(LRConstants(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(LRConstants(1.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(CorrelationDecay(1.0, 0.0), DomainError);
}

TEST_CASE("Lieb-Robinson and truncation bounds") {
  const LRConstants k(0.7, 2.0, 1.5);
  CHECK(lr_bound(k, 3, 4.0, 2.0) == doctest::Approx(2.1));
  CHECK(lr_bound(k, 3, 1.5, 0.0) == doctest::Approx(2.1 * std::exp(-1.0)));
  CHECK(lr_bound(k, 1, 5.0, -1.0) == doctest::Approx(lr_bound(k, 1, 5.0, 1.0)));
  CHECK(truncation_bound(k, 2, 4.0, 2.0) == doctest::Approx(1.4));
  CHECK(truncation_bound(k, 4, 6.0, 1.0) == doctest::Approx(2.0 * truncation_bound(k, 2, 6.0, 1.0)));
  CHECK(truncation_bound(k, 1, 1e4, 1.0) == 0.0);
}

TEST_CASE("optimal cut") {
  CHECK(optimal_cut(1.3, 1.3, 0.8, 2.0, 5.0) == doctest::Approx((0.8 * 2.0 + 5.0) / 3.0));
  CHECK(optimal_cut(2.0, 0.5, 1.0, 0.0, 6.0) == doctest::Approx(0.5 * 6.0 / 3.0));
  CHECK(optimal_cut(1e12, 1.0, 0.9, 2.0, 7.0) == doctest::Approx(1.8).epsilon(1e-9));
  CHECK(optimal_cut(1.0, 1.0, 1.0, 0.0, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("correlation spread") {
  const LRConstants k(1.0, 1.5, 0.5);
  const SpreadLength s(CorrelationDecay(2.0, 1.0), k);
  CHECK(s.value() == doctest::Approx(2.0));
  CHECK(correlation_spread_bound(0.3, s, 2, 3, 2 * 1.5 * 1.2, 1.2) == doctest::Approx(1.5));
  CHECK(correlation_spread_bound(0.3, s, 2, 3, 7.0, 1.0) ==
        doctest::Approx(correlation_spread_bound(0.3, s, 4, 1, 7.0, 1.0)));
  CHECK(correlation_spread_bound(0.3, s, 2, 3, 8.0, 1.0) < correlation_spread_bound(0.3, s, 2, 3, 7.0, 1.0));
}

TEST_CASE("Fannes bound") {
  CHECK(fannes_bound(0.0, 3, 2).bits == 0.0);
  CHECK(fannes_bound(1e-12, 3, 2).bits < 1e-10);
  const FannesValue half = fannes_bound(0.5, 1, 2);
  CHECK(half.bits == doctest::Approx(1.0));
  CHECK_FALSE(half.valid);
  const FannesValue quarter = fannes_bound(0.25, 2, 2);
  CHECK(quarter.bits == doctest::Approx(1.0));
  CHECK(quarter.valid);
  CHECK_THROWS_AS(fannes_bound(-0.1, 1, 2), DomainError);
}

TEST_CASE("capacity bound") {
  CHECK(capacity_bound(1.0, 3, 2) == doctest::Approx(6.0));
  CHECK(capacity_bound(0.5, 1, 2) == doctest::Approx(2.0));
  CHECK(capacity_bound(0.0, 2, 2) == 0.0);
  CHECK_THROWS_AS(capacity_bound(2.5, 1, 2), DomainError);
  CHECK_THROWS_AS(capacity_bound(-0.5, 1, 2), DomainError);
  // derivative 2 (nB log2 m - log2 eps) - 2 / ln 2 vanishes at eps = m^nB / e
  for (int nb = 1; nb <= 3; ++nb) {
    const double stationary = std::pow(2.0, nb) / std::exp(1.0);
    const double top = std::min(stationary, 2.0);
    double previous = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double eps = top * i / 200.0;
      const double c = capacity_bound(eps, nb, 2);
      CHECK(c >= previous);
      previous = c;
    }
  }
}

TEST_CASE("capacity with the Lieb-Robinson epsilon decays in L") {
  const LRConstants k(0.5, 1.0, 1.0);
  const double t = 1.5;
  double previous = 1e300;
  for (double L = 1.6; L < 30.0; L += 0.5) {
    const double c = capacity_bound(std::min(2.0, lr_bound(k, 1, L, t)), 2, 2);
    CHECK(c < previous);
    previous = c;
  }
}

TEST_CASE("entangling rate constant") {
  CHECK(entangling_rate_profile(0.5) == 0.0);
  CHECK(entangling_rate_profile(1.0) == 0.0);
  const CStar c = cstar();
  const auto [grid_value, grid_arg] = oracle::cstar_grid(1000000);
  CHECK(c.value == doctest::Approx(1.9123).epsilon(1e-3 / 1.9123));
  CHECK(c.x_star == doctest::Approx(0.9168).epsilon(1e-3 / 0.9168));
  CHECK(std::abs(c.value - grid_value) <= 1e-8);
  CHECK(std::abs(c.x_star - grid_arg) <= 1e-5);
  CHECK(c.value >= grid_value);
}

TEST_CASE("entropy rate bound and budget") {
  const double zeros[] = {0.0, 0.0};
  CHECK(entropy_rate_bound(zeros) == 0.0);
  const double rs[] = {0.5, -1.0};
  CHECK(entropy_rate_bound(rs) == doctest::Approx(1.5 * cstar().value));
  CHECK(entropy_budget(1.0, 1, 1.0) == doctest::Approx(cstar().value));
  CHECK(entropy_budget(0.7, 3, 2.0) == doctest::Approx(2.0 * entropy_budget(0.7, 3, 1.0)));
}

TEST_CASE("TQO epsilon propagation") {
  const LRConstants k(1.0, 1.0, 1.0);
  CHECK(tqo_epsilon_propagation(0.01, 200.0, k, 0.0, 2) == doctest::Approx(0.01));
  CHECK(tqo_epsilon_propagation(0.01, 6.0, k, 3.0, 2) == doctest::Approx(6.01));
  CHECK(tqo_epsilon_propagation(0.01, 6.0, k, 3.0, 3) == doctest::Approx(36.01));
  double previous = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double e = tqo_epsilon_propagation(0.0, 8.0, k, 0.1 * i, 2);
    CHECK(e > previous);
    previous = e;
  }
}

TEST_CASE("bounds are nonnegative and monotone on random draws") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> pos(0.05, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const LRConstants k(pos(rng), pos(rng), pos(rng));
    const double L = pos(rng), t = pos(rng), dl = pos(rng);
    const int n = 1 + trial % 5;
    CHECK(lr_bound(k, n, L, t) >= 0.0);
    CHECK(lr_bound(k, n, L + dl, t) < lr_bound(k, n, L, t));
    CHECK(lr_bound(k, n, L, t + dl) > lr_bound(k, n, L, t));
    CHECK(lr_bound(k, n + 1, L, t) > lr_bound(k, n, L, t));
    CHECK(truncation_bound(k, n, L + dl, t) < truncation_bound(k, n, L, t));
    CHECK(truncation_bound(k, n, L, t + dl) > truncation_bound(k, n, L, t));
    const SpreadLength s(CorrelationDecay(pos(rng), pos(rng)), k);
    CHECK(correlation_spread_bound(1.0, s, n, 1, L + dl, t) < correlation_spread_bound(1.0, s, n, 1, L, t));
    CHECK(correlation_spread_bound(1.0, s, n, 1, L, t + dl) > correlation_spread_bound(1.0, s, n, 1, L, t));
    const double delta = std::uniform_real_distribution<double>(1e-6, 1.0 / std::exp(1.0))(rng);
    CHECK(fannes_bound(delta, n, 2).bits >= 0.0);
    CHECK(fannes_bound(delta, n + 1, 2).bits > fannes_bound(delta, n, 2).bits);
    CHECK(optimal_cut(pos(rng), pos(rng), pos(rng), t, L) >= 0.0);
    CHECK(tqo_epsilon_propagation(0.0, L, k, t + dl, 2) > tqo_epsilon_propagation(0.0, L, k, t, 2));
  }
}
