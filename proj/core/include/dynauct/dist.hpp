#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace dynauct {

/// Finite distribution on a strictly ascending support.
///
/// Zero-probability points are allowed (declarative inputs may carry them);
/// operations that need positive mass at a point say so. Probabilities must
/// be non-negative and sum to 1 within 1e-12.
class DiscreteDist {
 public:
  DiscreteDist(std::vector<double> values, std::vector<double> probs);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }
  double value(std::size_t i) const { return values_.at(i); }
  double prob(std::size_t i) const { return probs_.at(i); }

  /// P[X <= x] for arbitrary x.
  double cdf(double x) const;
  /// P[X <= values()[i]], exact prefix sum.
  double cdf_at(std::size_t i) const;
  /// P[X > values()[i]], exact suffix sum (no cancellation).
  double upper_tail_at(std::size_t i) const;

  double mean() const;
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  /// Copy without zero-probability points.
  DiscreteDist pruned() const;

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
  std::vector<double> prefix_;  // prefix_[i] = P[X <= values_[i]]
  std::vector<double> suffix_;  // suffix_[i] = P[X > values_[i]]
};

/// Continuous distribution on [lo, hi]; hi may be +infinity. A point mass at
/// a finite hi is permitted (capped distributions); it shows up as a cdf jump
/// and is not represented by pdf.
class ContinuousDist {
 public:
  virtual ~ContinuousDist() = default;

  virtual double cdf(double x) const = 0;
  virtual double pdf(double x) const = 0;
  virtual double lo() const = 0;
  virtual double hi() const = 0;
  virtual std::string name() const = 0;

  /// Inverse cdf; default implementation bisects. u in [0, 1].
  virtual double quantile(double u) const;

  /// False when E[max of n draws] diverges (untruncated heavy tails).
  virtual bool max_integrable() const { return true; }

  /// E[X]; requires a finite lo and an integrable tail.
  double mean() const;
};

/// Exponential with the given rate on [0, inf).
class ExponentialDist final : public ContinuousDist {
 public:
  explicit ExponentialDist(double rate = 1.0);
  double cdf(double x) const override;
  double pdf(double x) const override;
  double lo() const override { return 0.0; }
  double hi() const override { return std::numeric_limits<double>::infinity(); }
  double quantile(double u) const override;
  std::string name() const override;
  double rate() const { return rate_; }

 private:
  double rate_;
};

/// Uniform on [a, b].
class UniformDist final : public ContinuousDist {
 public:
  UniformDist(double a, double b);
  double cdf(double x) const override;
  double pdf(double x) const override;
  double lo() const override { return a_; }
  double hi() const override { return b_; }
  double quantile(double u) const override;
  std::string name() const override;

 private:
  double a_, b_;
};

/// Weibull with shape k and scale s on [0, inf). Hazard is monotone
/// non-decreasing iff k >= 1.
class WeibullDist final : public ContinuousDist {
 public:
  explicit WeibullDist(double shape, double scale = 1.0);
  double cdf(double x) const override;
  double pdf(double x) const override;
  double lo() const override { return 0.0; }
  double hi() const override { return std::numeric_limits<double>::infinity(); }
  double quantile(double u) const override;
  std::string name() const override;
  double shape() const { return shape_; }

 private:
  double shape_, scale_;
};

/// Exponential(rate) conditioned on X <= cap; support [0, cap].
class TruncatedExponentialDist final : public ContinuousDist {
 public:
  TruncatedExponentialDist(double rate, double cap);
  double cdf(double x) const override;
  double pdf(double x) const override;
  double lo() const override { return 0.0; }
  double hi() const override { return cap_; }
  double quantile(double u) const override;
  std::string name() const override;

 private:
  double rate_, cap_, norm_;
};

/// F(x) = 1 - 1/x on [1, V): every posted price yields unit revenue.
/// With finite V the remaining 1/V mass sits at V (capped tail);
/// V = +infinity gives the untruncated version, whose maximum of n draws
/// has no finite mean.
class EqualRevenueDist final : public ContinuousDist {
 public:
  explicit EqualRevenueDist(
      double cap = std::numeric_limits<double>::infinity());
  double cdf(double x) const override;
  double pdf(double x) const override;
  double lo() const override { return 1.0; }
  double hi() const override { return cap_; }
  double quantile(double u) const override;
  bool max_integrable() const override;
  std::string name() const override;
  double cap() const { return cap_; }

 private:
  double cap_;
};

/// Distribution defined through a piecewise-linear cumulative hazard:
/// F(x) = 1 - exp(-H(x)) with H continuous, H(x_0) = 0, and constant slope
/// a_i on segment [x_i, x_{i+1}]. The hazard rate at x is the local slope,
/// so the distribution has a monotone hazard rate iff the slopes are
/// non-decreasing (H convex). Mass exp(-H(x_last)) sits at x_last.
class PiecewiseLinearH final : public ContinuousDist {
 public:
  /// breakpoints: ascending, size c+2; slopes: size c+1, all >= 0.
  PiecewiseLinearH(std::vector<double> breakpoints, std::vector<double> slopes);

  double cdf(double x) const override;
  double pdf(double x) const override;
  double lo() const override { return x_.front(); }
  double hi() const override { return x_.back(); }
  double quantile(double u) const override;
  std::string name() const override;

  /// Cumulative hazard H(x), clamped to the support.
  double cumulative_hazard(double x) const;
  /// Hazard rate (segment slope) at x.
  double hazard(double x) const;
  const std::vector<double>& breakpoints() const { return x_; }
  const std::vector<double>& slopes() const { return a_; }
  /// True iff slopes are non-decreasing within tol (convex H).
  bool convex(double tol = 0.0) const;

 private:
  std::vector<double> x_;
  std::vector<double> a_;
  std::vector<double> haz_at_;  // H(x_i)
};

// ---------------------------------------------------------------------------
// Order statistics.  Rank r counts from the top: rank 1 is the maximum of the
// n i.i.d. draws, rank n the minimum.
// ---------------------------------------------------------------------------

/// P[X_{r:n} <= x] given F = P[single draw <= x].
double order_stat_cdf_from_point(double F, int r, int n);

double order_stat_cdf(const DiscreteDist& dist, int r, int n, double x);
double order_stat_cdf(const ContinuousDist& dist, int r, int n, double x);

/// E[X_{r:n}]. Discrete supports are summed exactly; continuous ones use the
/// survival form lo + int_lo^hi (1 - F_{r:n}) via adaptive quadrature
/// (requires a finite lo). Throws numeric_error when the integral diverges
/// (untruncated heavy tail at rank 1).
double expected_order_stat(const DiscreteDist& dist, int r, int n);
double expected_order_stat(const ContinuousDist& dist, int r, int n);

// ---------------------------------------------------------------------------
// Virtual values.
// ---------------------------------------------------------------------------

/// Successor-gap virtual value at support index i:
///   phi(v_i) = v_i - (v_{i+1} - v_i) * P[X > v_i] / P[X = v_i],
/// and phi(v_max) = v_max. Requires positive mass at i.
double virtual_value_discrete(const DiscreteDist& dist, std::size_t i);

/// phi(x) = x - (1 - F(x)) / f(x). Requires f(x) > 0.
double virtual_value_continuous(const ContinuousDist& dist, double x);

// ---------------------------------------------------------------------------
// Hazard-rate monotonicity.
// ---------------------------------------------------------------------------

struct MhrReport {
  bool is_mhr = false;
  /// Largest normalized decrease of the hazard between consecutive grid
  /// points (0 when monotone).
  double max_violation = 0.0;
  /// Grid pair witnessing the largest decrease.
  double witness_x_lo = 0.0;
  double witness_x_hi = 0.0;
};

/// Checks hazard monotonicity of f/(1-F) on a grid over the support.
MhrReport check_mhr(const ContinuousDist& dist, int grid_size = 1024,
                    double tol = 1e-9);

/// Smallest x with 1 - F(x) < tail_mass (the support top when finite).
double effective_hi(const ContinuousDist& dist, double tail_mass = 1e-12);

}  // namespace dynauct
