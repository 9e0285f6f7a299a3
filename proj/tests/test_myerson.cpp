#include "dynauct/myerson.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dynauct/errors.hpp"

using namespace dynauct;

namespace {

/// Independent oracle: with a single buyer the best mechanism is a posted
/// price, so the optimal revenue is max over support p of p * P[X >= p].
double best_posted_price_revenue(const DiscreteDist& d) {
  double best = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    best = std::max(best, d.value(i) * (d.prob(i) + d.upper_tail_at(i)));
  }
  return best;
}

DiscreteDist random_dist(std::mt19937_64& rng, int max_points) {
  std::uniform_int_distribution<int> kdist(1, max_points);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = kdist(rng);
  std::vector<double> v, p;
  double x = 0.0, total = 0.0;
  for (int i = 0; i < k; ++i) {
    x += 0.05 + 3.0 * u(rng);
    v.push_back(x);
    p.push_back(0.05 + u(rng));
    total += p.back();
  }
  for (double& pi : p) pi /= total;
  // Re-normalize exactly so the constructor's sum check passes.
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) s += p[i];
  p.back() = 1.0 - s;
  return DiscreteDist(v, p);
}

}  // namespace

TEST_CASE("revenue curve endpoints and ordering") {
  DiscreteDist d({1.0, 2.0}, {0.5, 0.5});
  RevenueCurve rc = revenue_curve(d);
  REQUIRE(rc.q.size() == 3);
  CHECK(rc.q[0] == 0.0);
  CHECK(rc.q[1] == doctest::Approx(0.5));
  CHECK(rc.q[2] == 1.0);
  CHECK(rc.R[0] == 0.0);
  CHECK(rc.R[1] == doctest::Approx(1.0));  // price 2 sells w.p. 1/2
  CHECK(rc.R[2] == doctest::Approx(1.0));  // price 1 sells w.p. 1
  CHECK(rc.value_desc[0] == 2.0);
  CHECK(rc.value_desc[1] == 1.0);
}

TEST_CASE("ironing leaves a regular distribution untouched") {
  DiscreteDist d({1.0, 2.0}, {0.5, 0.5});
  IronedVirtuals iv = ironed_virtuals(d);
  CHECK(iv.phi[0] == doctest::Approx(0.0));
  CHECK(iv.phi[1] == doctest::Approx(2.0));
  CHECK(iv.phi_bar[0] == doctest::Approx(iv.phi[0]));
  CHECK(iv.phi_bar[1] == doctest::Approx(iv.phi[1]));
}

TEST_CASE("ironing flattens a bimodal valley") {
  // phi by the successor-gap rule: -0.5, -3, -1, 4 (not monotone).
  // The hull of the revenue curve replaces the valley by a single slope -1.
  DiscreteDist d({1.0, 2.0, 3.0, 4.0}, {0.4, 0.1, 0.1, 0.4});
  IronedVirtuals iv = ironed_virtuals(d);
  CHECK(iv.phi[0] == doctest::Approx(-0.5));
  CHECK(iv.phi[1] == doctest::Approx(-3.0));
  CHECK(iv.phi[2] == doctest::Approx(-1.0));
  CHECK(iv.phi[3] == doctest::Approx(4.0));
  CHECK(iv.phi_bar[0] == doctest::Approx(-1.0));
  CHECK(iv.phi_bar[1] == doctest::Approx(-1.0));
  CHECK(iv.phi_bar[2] == doctest::Approx(-1.0));
  CHECK(iv.phi_bar[3] == doctest::Approx(4.0));
}

TEST_CASE("point mass irons to itself") {
  DiscreteDist d({7.0}, {1.0});
  IronedVirtuals iv = ironed_virtuals(d);
  CHECK(iv.phi_bar[0] == doctest::Approx(7.0));
  CHECK(myerson_revenue(d, 1) == doctest::Approx(7.0));
  CHECK(myerson_revenue(d, 3) == doctest::Approx(7.0));
}

TEST_CASE("ironed virtuals: monotone, dominant in tail sums, revenue-exact") {
  std::mt19937_64 rng(7261u);
  for (int trial = 0; trial < 60; ++trial) {
    DiscreteDist d = random_dist(rng, 7);
    IronedVirtuals iv = ironed_virtuals(d);
    const std::size_t s = d.size();
    double tail_phi = 0.0, tail_bar = 0.0;
    for (std::size_t j = s; j-- > 0;) {
      if (j + 1 < s) {
        CHECK(iv.phi_bar[j] <= iv.phi_bar[j + 1] + 1e-12);
      }
      tail_phi += d.prob(j) * iv.phi[j];
      tail_bar += d.prob(j) * iv.phi_bar[j];
      // Tail sums of the ironed curve dominate the raw ones (hull >= curve).
      CHECK(tail_bar >= tail_phi - 1e-12);
    }
    // Full sums agree: both endpoints lie on the hull.
    CHECK(tail_bar == doctest::Approx(tail_phi).epsilon(1e-10));

    // Single-buyer revenue equals the best posted price, regular or not.
    CHECK(myerson_revenue(d, 1) ==
          doctest::Approx(best_posted_price_revenue(d)).epsilon(1e-10));
  }
}

TEST_CASE("two-buyer revenue on the two-point uniform") {
  // Price 2 to whichever buyer values it: revenue 2 * (1 - 1/4) = 1.5.
  DiscreteDist d({1.0, 2.0}, {0.5, 0.5});
  CHECK(myerson_revenue(d, 1) == doctest::Approx(1.0));
  CHECK(myerson_revenue(d, 2) == doctest::Approx(1.5));
}

TEST_CASE("more buyers never lower the optimal revenue") {
  DiscreteDist d({1.0, 2.0, 3.0, 4.0}, {0.4, 0.1, 0.1, 0.4});
  double prev = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const double cur = myerson_revenue(d, n);
    CHECK(cur >= prev - 1e-12);
    CHECK(cur <= expected_order_stat(d, 1, n) + 1e-12);  // revenue <= welfare
    prev = cur;
  }
}

TEST_CASE("doubling ladder support tops out below two") {
  // Support 0, 2, 4, ..., 2^5 with tail probabilities halving: every posted
  // price 2^i earns 2 - 2^(i-5), so the optimum is 2 - 2^-4 = 1.9375.
  std::vector<double> v = {0.0}, p = {1.0 / 32.0};
  for (int i = 1; i <= 5; ++i) {
    v.push_back(std::pow(2.0, i));
    p.push_back(std::pow(2.0, -i));
  }
  DiscreteDist d(v, p);
  const double mye = myerson_revenue(d, 1);
  CHECK(mye == doctest::Approx(best_posted_price_revenue(d)).epsilon(1e-12));
  CHECK(mye > 1.9);
  CHECK(mye <= 2.0);
  CHECK(optimal_reserve(d) == doctest::Approx(2.0));
}

TEST_CASE("profile enumeration cap raises a size error") {
  std::vector<double> v, p;
  for (int i = 0; i < 10; ++i) {
    v.push_back(i + 1.0);
    p.push_back(0.1);
  }
  DiscreteDist d(v, p);
  CHECK_THROWS_AS(myerson_revenue(d, 8, 10'000'000), size_error);
  CHECK_NOTHROW(myerson_revenue(d, 6, 10'000'000));
}

TEST_CASE("reserve argmax prefers the lower price on ties") {
  DiscreteDist d({1.0, 2.0}, {0.5, 0.5});
  CHECK(optimal_reserve(d) == doctest::Approx(1.0));
  DiscreteDist b({1.0, 2.0, 3.0, 4.0}, {0.4, 0.1, 0.1, 0.4});
  CHECK(optimal_reserve(b) == doctest::Approx(4.0));
}

TEST_CASE("continuous optimal revenue: closed-form anchors") {
  UniformDist u(0.0, 1.0);
  CHECK(myerson_revenue(u, 1) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(myerson_revenue(u, 2) == doctest::Approx(5.0 / 12.0).epsilon(1e-6));
  ExponentialDist e(1.0);
  CHECK(myerson_revenue(e, 1) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("auction with reserve beats every plain posted price") {
  ExponentialDist e(1.0);
  for (int n : {2, 3}) {
    const double mye = myerson_revenue(e, n);
    double posted = 0.0;
    for (int i = 1; i <= 2000; ++i) {
      const double p = e.quantile(i / 2001.0);
      posted = std::max(posted, p * (1.0 - std::pow(e.cdf(p), n)));
    }
    CHECK(mye >= posted - 1e-9);
  }
}

TEST_CASE("monotone-hazard families earn at least 1/e of the mean") {
  const ExponentialDist e(1.0);
  const WeibullDist w(1.5, 1.0);
  const UniformDist u(0.0, 1.0);
  const ContinuousDist* dists[] = {&e, &w, &u};
  for (const ContinuousDist* d : dists) {
    CHECK(myerson_revenue(*d, 1) >= d->mean() / std::exp(1.0) - 1e-6);
  }
}

TEST_CASE("extra-buyer report on the exponential") {
  BkReport rep = bk_check(ExponentialDist(1.0), 2);
  CHECK(rep.vcg_plus_one == doctest::Approx(5.0 / 6.0).epsilon(1e-7));
  CHECK(rep.pass_plus_one);
  CHECK(rep.pass_same);
  CHECK(rep.margin_plus_one == doctest::Approx(rep.vcg_plus_one -
                                               rep.myerson_opt));
}

TEST_CASE("extra-buyer report on the unit uniform with one buyer") {
  BkReport rep = bk_check(UniformDist(0.0, 1.0), 1);
  CHECK(rep.myerson_opt == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(rep.vcg_plus_one == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
  CHECK(rep.vcg_same == 0.0);
  CHECK(rep.pass_plus_one);
  CHECK(rep.pass_same);
  CHECK(rep.margin_same == doctest::Approx(0.0));
}

TEST_CASE("near-degenerate support gives near-equal margins") {
  BkReport rep = bk_check(UniformDist(0.999, 1.001), 2);
  CHECK(rep.pass_plus_one);
  CHECK(std::abs(rep.margin_plus_one) < 2e-3);
}

TEST_CASE("non-regular input is rejected") {
  CHECK_THROWS_AS(bk_check(WeibullDist(0.7), 2), domain_error);
}
