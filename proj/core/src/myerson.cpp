#include "dynauct/myerson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynauct/errors.hpp"
#include "dynauct/quadrature.hpp"

namespace dynauct {

namespace {

void require_positive_mass(const DiscreteDist& dist) {
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist.prob(i) <= 0.0) {
      throw domain_error(
          "every support point needs positive mass here; call pruned() first");
    }
  }
}

}  // namespace

RevenueCurve revenue_curve(const DiscreteDist& dist) {
  require_positive_mass(dist);
  const std::size_t s = dist.size();
  RevenueCurve rc;
  rc.q.resize(s + 1);
  rc.R.resize(s + 1);
  rc.value_desc.resize(s);
  rc.q[0] = 0.0;
  rc.R[0] = 0.0;
  for (std::size_t j = 1; j <= s; ++j) {
    const std::size_t i = s - j;  // ascending index of the j-th largest value
    const double v = dist.value(i);
    // P[X >= v] as an exact tail sum: mass at v plus everything above it.
    const double q = dist.prob(i) + dist.upper_tail_at(i);
    rc.value_desc[j - 1] = v;
    rc.q[j] = j == s ? 1.0 : q;
    rc.R[j] = v * rc.q[j];
  }
  return rc;
}

IronedVirtuals ironed_virtuals(const DiscreteDist& dist) {
  const RevenueCurve rc = revenue_curve(dist);
  const std::size_t s = rc.value_desc.size();

  IronedVirtuals out;
  out.phi.resize(s);
  out.phi_bar.resize(s);

  // Raw virtual values: marginal revenue between consecutive quantiles.
  for (std::size_t j = 1; j <= s; ++j) {
    const double slope =
        (rc.R[j] - rc.R[j - 1]) / (rc.q[j] - rc.q[j - 1]);
    out.phi[s - j] = slope;  // map descending rank j to ascending index
  }

  // Upper concave hull of the revenue curve (monotone chain): pop the middle
  // point whenever it lies on or below the chord of its neighbours.
  std::vector<std::size_t> hull;
  for (std::size_t j = 0; j <= s; ++j) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double lhs = (rc.R[b] - rc.R[a]) * (rc.q[j] - rc.q[b]);
      const double rhs = (rc.R[j] - rc.R[b]) * (rc.q[b] - rc.q[a]);
      if (lhs <= rhs) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(j);
  }

  // Ironed value at descending rank j = slope of the hull segment covering
  // (q_{j-1}, q_j].
  std::size_t t = 1;
  for (std::size_t j = 1; j <= s; ++j) {
    while (hull[t] < j) ++t;
    const std::size_t a = hull[t - 1];
    const std::size_t b = hull[t];
    out.phi_bar[s - j] = (rc.R[b] - rc.R[a]) / (rc.q[b] - rc.q[a]);
  }
  return out;
}

double myerson_revenue(const DiscreteDist& dist, int n,
                       std::size_t profile_cap) {
  if (n < 1) throw domain_error("need at least one buyer");
  const DiscreteDist d = dist.pruned();
  const std::size_t k = d.size();

  double profiles = 1.0;
  for (int b = 0; b < n; ++b) profiles *= static_cast<double>(k);
  if (profiles > static_cast<double>(profile_cap)) {
    throw size_error("profile space exceeds the enumeration cap");
  }

  const IronedVirtuals iv = ironed_virtuals(d);

  // Exact expectation of max(0, max_i phi_bar(v_i)) over the product space.
  std::vector<std::size_t> idx(n, 0);
  double total = 0.0;
  while (true) {
    double p = 1.0;
    double best = 0.0;
    for (int b = 0; b < n; ++b) {
      p *= d.prob(idx[b]);
      best = std::max(best, iv.phi_bar[idx[b]]);
    }
    total += p * best;
    int b = 0;
    while (b < n && ++idx[b] == k) {
      idx[b] = 0;
      ++b;
    }
    if (b == n) break;
  }
  return total;
}

double myerson_revenue(const ContinuousDist& dist, int n, int reserve_grid) {
  if (n < 1) throw domain_error("need at least one buyer");
  if (reserve_grid < 2) throw domain_error("reserve grid needs >= 2 points");

  // Reserve candidates at single-draw quantiles (dense where the mass is).
  std::vector<double> p(reserve_grid);
  for (int i = 0; i < reserve_grid; ++i) {
    p[i] = dist.quantile(static_cast<double>(i + 1) / (reserve_grid + 1));
  }
  p.erase(std::unique(p.begin(), p.end()), p.end());
  const int g = static_cast<int>(p.size());

  if (n == 1) {
    double best = 0.0;
    for (int i = 0; i < g; ++i) {
      best = std::max(best, p[i] * (1.0 - dist.cdf(p[i])));
    }
    return best;
  }

  // Revenue of a second-price auction with reserve r:
  //   r * P[highest >= r] + integral_r^top P[second-highest > t] dt.
  // Accumulate the tail integral right-to-left over the grid segments.
  const double top = effective_hi(dist, 1e-13);
  auto tail2 = [&](double t) {
    return 1.0 - order_stat_cdf_from_point(dist.cdf(t), 2, n);
  };
  std::vector<double> tail_int(g + 1);
  tail_int[g] = p[g - 1] < top
                    ? integrate(tail2, p[g - 1], top, 1e-13, 1e-10)
                    : 0.0;
  for (int i = g - 1; i >= 1; --i) {
    tail_int[i] =
        tail_int[i + 1] + integrate(tail2, p[i - 1], p[i], 1e-13, 1e-10);
  }

  double best = 0.0;
  for (int i = 0; i < g; ++i) {
    const double win = 1.0 - std::pow(dist.cdf(p[i]), n);
    best = std::max(best, p[i] * win + tail_int[i + 1]);
  }
  return best;
}

double optimal_reserve(const DiscreteDist& dist) {
  double best_p = dist.value(0);
  double best_rev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double rev =
        dist.value(i) * (dist.prob(i) + dist.upper_tail_at(i));
    if (rev > best_rev) {
      best_rev = rev;
      best_p = dist.value(i);
    }
  }
  return best_p;
}

BkReport bk_check(const ContinuousDist& dist, int n) {
  if (n < 1) throw domain_error("need at least one buyer");

  // Regularity screen: the virtual value must be non-decreasing along a
  // quantile grid (sampled away from the extreme tail, as in check_mhr).
  const int kGrid = 1024;
  double prev_phi = -std::numeric_limits<double>::infinity();
  double prev_x = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= kGrid; ++i) {
    const double x = dist.quantile(static_cast<double>(i) / (kGrid + 1));
    if (!(x > prev_x)) continue;
    const double f = dist.pdf(x);
    if (f <= 0.0) continue;
    const double phi = x - (1.0 - dist.cdf(x)) / f;
    const double slack =
        1e-7 * std::max({1.0, std::abs(phi), std::abs(prev_phi)});
    if (phi < prev_phi - slack) {
      throw domain_error("virtual value decreases: distribution not regular");
    }
    prev_phi = phi;
    prev_x = x;
  }

  BkReport rep;
  rep.n = n;
  rep.myerson_opt = myerson_revenue(dist, n);
  rep.vcg_plus_one = expected_order_stat(dist, 2, n + 1);
  rep.vcg_same = n >= 2 ? expected_order_stat(dist, 2, n) : 0.0;
  rep.margin_plus_one = rep.vcg_plus_one - rep.myerson_opt;
  rep.margin_same =
      rep.vcg_same - (static_cast<double>(n - 1) / n) * rep.myerson_opt;
  rep.pass_plus_one = rep.margin_plus_one >= -1e-9;
  rep.pass_same = rep.margin_same >= -1e-9;
  return rep;
}

}  // namespace dynauct
