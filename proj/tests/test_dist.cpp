#include "dynauct/dist.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "dynauct/errors.hpp"

using namespace dynauct;

namespace {

/// Independent oracle: the exact distribution of the rank-r value (rank 1 =
/// largest) of n i.i.d. draws, found by enumerating every one of the
/// size^n outcomes. Used to validate the closed-form order-statistic code.
struct RankLaw {
  std::vector<double> values;  // ascending
  std::vector<double> probs;

  double cdf(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] <= x) s += probs[i];
    }
    return s;
  }
  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probs[i];
    return m;
  }
};

RankLaw enumerate_rank_law(const DiscreteDist& d, int r, int n) {
  std::map<double, double> law;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    double p = 1.0;
    std::vector<double> draw(n);
    for (int k = 0; k < n; ++k) {
      p *= d.prob(idx[k]);
      draw[k] = d.value(idx[k]);
    }
    if (p > 0.0) {
      std::sort(draw.begin(), draw.end(), std::greater<double>());
      law[draw[r - 1]] += p;
    }
    int k = 0;
    while (k < n && ++idx[k] == d.size()) {
      idx[k] = 0;
      ++k;
    }
    if (k == n) break;
  }
  RankLaw out;
  for (const auto& [v, p] : law) {
    out.values.push_back(v);
    out.probs.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("order-statistic cdf and mean match exhaustive enumeration") {
  DiscreteDist d({0.5, 1.25, 2.0, 3.0}, {0.1, 0.4, 0.2, 0.3});
  for (int n = 1; n <= 4; ++n) {
    for (int r = 1; r <= n; ++r) {
      RankLaw oracle = enumerate_rank_law(d, r, n);
      for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(order_stat_cdf(d, r, n, d.value(i)) ==
              doctest::Approx(oracle.cdf(d.value(i))).epsilon(1e-12));
      }
      CHECK(expected_order_stat(d, r, n) ==
            doctest::Approx(oracle.mean()).epsilon(1e-12));
    }
  }
}

TEST_CASE("second-highest of four fair coin draws") {
  // All 16 outcomes of four draws from {0, 1} at probability 1/2 each:
  // the second-highest is 0 exactly when at most one draw equals 1,
  // which happens in 1 + 4 of the 16 outcomes.
  DiscreteDist coin({0.0, 1.0}, {0.5, 0.5});
  RankLaw oracle = enumerate_rank_law(coin, 2, 4);
  CHECK(oracle.cdf(0.0) == doctest::Approx(5.0 / 16.0).epsilon(1e-15));
  CHECK(order_stat_cdf_from_point(0.5, 2, 4) ==
        doctest::Approx(5.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("zero-probability support points are tolerated") {
  DiscreteDist d({0.0, 1.0, 2.0}, {0.25, 0.0, 0.75});
  CHECK(d.cdf(1.0) == doctest::Approx(0.25));
  CHECK(d.cdf(1.5) == doctest::Approx(0.25));
  CHECK(expected_order_stat(d, 1, 2) ==
        doctest::Approx(enumerate_rank_law(d, 1, 2).mean()).epsilon(1e-12));
  DiscreteDist p = d.pruned();
  CHECK(p.size() == 2);
  CHECK(p.value(1) == 2.0);
  CHECK_THROWS_AS(virtual_value_discrete(d, 1), domain_error);
}

TEST_CASE("discrete constructor rejects malformed inputs") {
  CHECK_THROWS_AS(DiscreteDist({2.0, 1.0}, {0.5, 0.5}), domain_error);
  CHECK_THROWS_AS(DiscreteDist({1.0, 2.0}, {0.7, 0.4}), domain_error);
  CHECK_THROWS_AS(DiscreteDist({1.0, 2.0}, {-0.1, 1.1}), domain_error);
  CHECK_THROWS_AS(DiscreteDist({1.0}, {0.5, 0.5}), domain_error);
  CHECK_THROWS_AS(DiscreteDist({}, {}), domain_error);
}

TEST_CASE("exponential order-statistic means are partial harmonic sums") {
  ExponentialDist e(1.0);
  double harmonic = 0.0;
  for (int n = 1; n <= 10; ++n) {
    harmonic += 1.0 / n;
    CHECK(expected_order_stat(e, 1, n) ==
          doctest::Approx(harmonic).epsilon(1e-8));
    if (n >= 2) {
      CHECK(expected_order_stat(e, 2, n) ==
            doctest::Approx(harmonic - 1.0).epsilon(1e-8));
    }
  }
  CHECK(expected_order_stat(e, 2, 3) == doctest::Approx(5.0 / 6.0).epsilon(1e-9));
  CHECK(expected_order_stat(e, 2, 4) ==
        doctest::Approx(13.0 / 12.0).epsilon(1e-9));
}

TEST_CASE("uniform order-statistic means are rational") {
  UniformDist u(0.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    for (int r = 1; r <= n; ++r) {
      CHECK(expected_order_stat(u, r, n) ==
            doctest::Approx(double(n + 1 - r) / (n + 1)).epsilon(1e-9));
    }
  }
}

TEST_CASE("order-statistic means sum to n times the mean") {
  ExponentialDist e(1.0);
  for (int n = 2; n <= 4; ++n) {
    double lhs = 0.0;
    for (int r = 1; r <= n; ++r) lhs += expected_order_stat(e, r, n);
    CHECK(lhs == doctest::Approx(double(n)).epsilon(1e-8));
  }
}

TEST_CASE("unit-revenue tail: rank means and divergence at the top") {
  EqualRevenueDist er;  // untruncated
  CHECK_THROWS_AS(expected_order_stat(er, 1, 3), numeric_error);
  CHECK_THROWS_AS(er.mean(), numeric_error);
  for (int n = 2; n <= 6; ++n) {
    for (int r = 2; r <= n; ++r) {
      CHECK(expected_order_stat(er, r, n) ==
            doctest::Approx(double(n) / (r - 1)).epsilon(1e-7));
    }
  }
}

TEST_CASE("capped unit-revenue tail approaches the uncapped rank means") {
  const double cap = 1e8;
  EqualRevenueDist er(cap);
  CHECK(expected_order_stat(er, 2, 2) ==
        doctest::Approx(2.0 - 1.0 / cap).epsilon(1e-9));
  for (int n = 2; n <= 6; ++n) {
    CHECK(expected_order_stat(er, 2, n) ==
          doctest::Approx(double(n)).epsilon(1e-4));
  }
  // The cap makes every moment finite, including the maximum.
  CHECK(expected_order_stat(er, 1, 2) > 2.0);
}

TEST_CASE("monte-carlo cross-check of a weibull order statistic") {
  WeibullDist w(1.5, 2.0);
  const int kBlocks = 40000;
  const int n = 5;
  std::mt19937_64 rng(20240817ull);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sum = 0.0, sumsq = 0.0;
  for (int b = 0; b < kBlocks; ++b) {
    double best = -1.0, second = -1.0;
    for (int k = 0; k < n; ++k) {
      const double x = w.quantile(unif(rng));
      if (x > best) {
        second = best;
        best = x;
      } else if (x > second) {
        second = x;
      }
    }
    sum += second;
    sumsq += second * second;
  }
  const double mc = sum / kBlocks;
  const double var = (sumsq / kBlocks - mc * mc) / kBlocks;
  const double exact = expected_order_stat(w, 2, n);
  CHECK(std::abs(mc - exact) < 4.0 * std::sqrt(var));
}

TEST_CASE("quantile round-trips through the cdf") {
  ExponentialDist e(0.7);
  UniformDist u(-1.0, 3.0);
  WeibullDist w(2.2, 0.5);
  TruncatedExponentialDist t(1.0, 5.0);
  EqualRevenueDist er(100.0);
  PiecewiseLinearH plh({0.0, 1.0, 3.0}, {0.5, 2.0});
  const ContinuousDist* dists[] = {&e, &u, &w, &t, &er, &plh};
  for (const ContinuousDist* d : dists) {
    for (double q : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.985}) {
      CHECK(d->cdf(d->quantile(q)) == doctest::Approx(q).epsilon(1e-9));
    }
  }
}

TEST_CASE("default bisection quantile serves subclasses without overrides") {
  struct MaxOfTwoUniforms : ContinuousDist {
    double cdf(double x) const override {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return x * x;
    }
    double pdf(double x) const override {
      return (x < 0.0 || x > 1.0) ? 0.0 : 2.0 * x;
    }
    double lo() const override { return 0.0; }
    double hi() const override { return 1.0; }
    std::string name() const override { return "max-of-two-uniforms"; }
  } d;
  CHECK(d.quantile(0.25) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(d.mean() == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(expected_order_stat(UniformDist(0.0, 1.0), 1, 2) ==
        doctest::Approx(d.mean()).epsilon(1e-9));
}

TEST_CASE("virtual values match hand-computed forms") {
  DiscreteDist two({1.0, 2.0}, {0.5, 0.5});
  CHECK(virtual_value_discrete(two, 0) == doctest::Approx(0.0));
  CHECK(virtual_value_discrete(two, 1) == doctest::Approx(2.0));

  ExponentialDist e(1.0);
  for (double x : {0.3, 1.0, 2.5}) {
    CHECK(virtual_value_continuous(e, x) == doctest::Approx(x - 1.0));
  }
  UniformDist u(0.0, 1.0);
  for (double x : {0.2, 0.5, 0.9}) {
    CHECK(virtual_value_continuous(u, x) == doctest::Approx(2.0 * x - 1.0));
  }
  // Unit-revenue tail: the virtual value vanishes identically.
  EqualRevenueDist er;
  for (double x : {1.5, 4.0, 50.0}) {
    CHECK(virtual_value_continuous(er, x) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("hazard monotonicity classification of the stock families") {
  CHECK(check_mhr(ExponentialDist(1.0)).is_mhr);
  CHECK(check_mhr(UniformDist(0.0, 1.0)).is_mhr);
  CHECK(check_mhr(WeibullDist(1.5)).is_mhr);
  CHECK(check_mhr(TruncatedExponentialDist(1.0, 10.0)).is_mhr);
  CHECK(check_mhr(PiecewiseLinearH({0.0, 1.0, 2.0}, {0.5, 3.0})).is_mhr);

  MhrReport bad = check_mhr(WeibullDist(0.7));
  CHECK_FALSE(bad.is_mhr);
  CHECK(bad.max_violation > 0.0);
  CHECK(bad.witness_x_lo < bad.witness_x_hi);

  CHECK_FALSE(check_mhr(EqualRevenueDist(100.0)).is_mhr);
  CHECK_FALSE(check_mhr(PiecewiseLinearH({0.0, 1.0, 2.0}, {3.0, 0.5})).is_mhr);
}

TEST_CASE("piecewise-linear hazard with unit slope reproduces the exponential") {
  PiecewiseLinearH plh({0.0, 40.0}, {1.0});
  ExponentialDist e(1.0);
  for (double x : {0.0, 0.5, 1.0, 3.0, 10.0, 39.0}) {
    CHECK(plh.cdf(x) == doctest::Approx(e.cdf(x)).epsilon(1e-12));
  }
  CHECK(expected_order_stat(plh, 2, 4) ==
        doctest::Approx(13.0 / 12.0).epsilon(1e-6));
  CHECK(plh.convex());
}

TEST_CASE("flat hazard segments carry no mass and quantiles skip them") {
  PiecewiseLinearH plh({0.0, 1.0, 2.0, 3.0}, {1.0, 0.0, 1.0});
  CHECK(plh.cdf(1.2) == doctest::Approx(plh.cdf(1.0)));
  CHECK(plh.cdf(1.9) == doctest::Approx(plh.cdf(1.0)));
  const double u = 1.0 - std::exp(-1.5);  // H must reach 1.5
  CHECK(plh.quantile(u) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_FALSE(plh.convex());
  CHECK(plh.convex(0.0) == false);
}

TEST_CASE("effective upper endpoint finds the stated tail mass") {
  // Placement of the 1e-12 tail boundary is cancellation-limited in 1-F,
  // so only coarse agreement is meaningful.
  CHECK(std::abs(effective_hi(ExponentialDist(1.0), 1e-12) -
                 12.0 * std::log(10.0)) < 0.05);
  CHECK(effective_hi(UniformDist(0.0, 2.0)) == 2.0);
  CHECK(effective_hi(TruncatedExponentialDist(1.0, 7.0)) == 7.0);
}

TEST_CASE("rank arguments are validated") {
  ExponentialDist e(1.0);
  CHECK_THROWS_AS(expected_order_stat(e, 0, 3), domain_error);
  CHECK_THROWS_AS(expected_order_stat(e, 4, 3), domain_error);
  CHECK_THROWS_AS(order_stat_cdf_from_point(0.5, 2, 1), domain_error);
  CHECK_THROWS_AS(order_stat_cdf_from_point(1.5, 1, 1), domain_error);
}
