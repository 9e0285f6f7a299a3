#pragma once

#include <cstddef>
#include <vector>

#include "dynauct/dist.hpp"

namespace dynauct {

/// Revenue of a posted price in quantile space, one point per support value
/// taken in descending order: q[j] = P[X >= value_desc[j-1]] and
/// R[j] = q[j] * value_desc[j-1], with the origin q[0] = 0, R[0] = 0
/// prepended. R[s] = 1 * v_min. The concave hull of (q, R) drives ironing.
struct RevenueCurve {
  std::vector<double> q;           // size s+1, strictly increasing, ends at 1
  std::vector<double> R;           // size s+1, R[0] = 0
  std::vector<double> value_desc;  // size s, descending support values
};

/// Requires every support point to carry positive mass (prune first).
RevenueCurve revenue_curve(const DiscreteDist& dist);

/// Raw and ironed virtual values, aligned with the ascending support.
/// phi_bar is non-decreasing; it equals phi on segments where the concave
/// hull of the revenue curve coincides with the curve.
struct IronedVirtuals {
  std::vector<double> phi;
  std::vector<double> phi_bar;
};

/// Requires every support point to carry positive mass (prune first).
IronedVirtuals ironed_virtuals(const DiscreteDist& dist);

/// Optimal one-shot auction revenue for n i.i.d. buyers: the expectation of
/// max(0, max_i phi_bar(v_i)), summed exactly over the n-fold product of the
/// (pruned) support. Throws size_error when the product exceeds profile_cap.
double myerson_revenue(const DiscreteDist& dist, int n,
                       std::size_t profile_cap = 10'000'000);

/// Optimal revenue for n i.i.d. buyers with a regular continuous
/// distribution, computed as the best second-price auction with a reserve,
/// scanned over a reserve grid placed at single-draw quantiles. The grid max
/// never exceeds the true optimum (one-sided error ~ grid step squared).
double myerson_revenue(const ContinuousDist& dist, int n,
                       int reserve_grid = 10'000);

/// An argmax posted price p of p * P[X >= p] over the support, ties broken
/// toward the lower price.
double optimal_reserve(const DiscreteDist& dist);

/// Margins of the two extra-buyer comparisons for a regular continuous
/// distribution:
///   E[second-highest of n+1]  vs  optimal revenue with n buyers, and
///   E[second-highest of n]    vs  (n-1)/n times that revenue.
/// The second-highest of a single draw counts as 0.
struct BkReport {
  int n = 0;
  double myerson_opt = 0.0;  // optimal revenue with n buyers
  double vcg_plus_one = 0.0;  // E[X_{2:n+1}]
  double vcg_same = 0.0;      // E[X_{2:n}], 0 when n == 1
  double margin_plus_one = 0.0;
  double margin_same = 0.0;
  bool pass_plus_one = false;
  bool pass_same = false;
};

/// Throws domain_error when the distribution is not regular (its virtual
/// value decreases somewhere on a quantile grid).
BkReport bk_check(const ContinuousDist& dist, int n);

}  // namespace dynauct
