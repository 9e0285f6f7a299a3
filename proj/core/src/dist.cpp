#include "dynauct/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dynauct/errors.hpp"
#include "dynauct/quadrature.hpp"

namespace dynauct {

namespace {

constexpr double kProbSumTol = 1e-12;

void require(bool cond, const char* msg) {
  if (!cond) throw domain_error(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteDist
// ---------------------------------------------------------------------------

DiscreteDist::DiscreteDist(std::vector<double> values,
                           std::vector<double> probs)
    : values_(std::move(values)), probs_(std::move(probs)) {
  require(!values_.empty(), "discrete support must be non-empty");
  require(values_.size() == probs_.size(),
          "support and probability vectors must have equal length");
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    require(std::isfinite(values_[i]), "support values must be finite");
    require(std::isfinite(probs_[i]) && probs_[i] >= 0.0,
            "probabilities must be finite and non-negative");
    if (i > 0) {
      require(values_[i] > values_[i - 1],
              "support values must be strictly ascending");
    }
    sum += probs_[i];
  }
  require(std::abs(sum - 1.0) <= kProbSumTol,
          "probabilities must sum to 1 within 1e-12");

  prefix_.resize(values_.size());
  suffix_.resize(values_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    acc += probs_[i];
    prefix_[i] = std::min(acc, 1.0);
  }
  acc = 0.0;
  for (std::size_t i = values_.size(); i-- > 0;) {
    suffix_[i] = std::min(acc, 1.0);
    acc += probs_[i];
  }
}

double DiscreteDist::cdf(double x) const {
  // Index of the last support point <= x.
  auto it = std::upper_bound(values_.begin(), values_.end(), x);
  if (it == values_.begin()) return 0.0;
  return prefix_[static_cast<std::size_t>(it - values_.begin()) - 1];
}

double DiscreteDist::cdf_at(std::size_t i) const { return prefix_.at(i); }

double DiscreteDist::upper_tail_at(std::size_t i) const {
  return suffix_.at(i);
}

double DiscreteDist::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) m += values_[i] * probs_[i];
  return m;
}

DiscreteDist DiscreteDist::pruned() const {
  std::vector<double> v, p;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (probs_[i] > 0.0) {
      v.push_back(values_[i]);
      p.push_back(probs_[i]);
    }
  }
  return DiscreteDist(std::move(v), std::move(p));
}

// ---------------------------------------------------------------------------
// ContinuousDist
// ---------------------------------------------------------------------------

double ContinuousDist::quantile(double u) const {
  require(u >= 0.0 && u <= 1.0, "quantile argument must lie in [0, 1]");
  double a = lo();
  if (u <= 0.0) return a;
  double b = hi();
  if (!std::isfinite(b)) {
    b = std::max(a, 1.0);
    while (cdf(b) < u && std::isfinite(b)) b *= 2.0;
    if (!std::isfinite(b)) {
      throw numeric_error("quantile: could not bracket the target mass");
    }
  }
  for (int iter = 0; iter < 200 && b - a > 1e-14 * std::max(1.0, std::abs(b));
       ++iter) {
    const double mid = 0.5 * (a + b);
    if (cdf(mid) < u) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double ContinuousDist::mean() const {
  return expected_order_stat(*this, 1, 1);
}

// ---------------------------------------------------------------------------
// Exponential
// ---------------------------------------------------------------------------

ExponentialDist::ExponentialDist(double rate) : rate_(rate) {
  require(rate > 0.0 && std::isfinite(rate), "exponential rate must be > 0");
}

double ExponentialDist::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-rate_ * x);
}

double ExponentialDist::pdf(double x) const {
  if (x < 0.0) return 0.0;
  return rate_ * std::exp(-rate_ * x);
}

double ExponentialDist::quantile(double u) const {
  require(u >= 0.0 && u <= 1.0, "quantile argument must lie in [0, 1]");
  if (u >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-u) / rate_;
}

std::string ExponentialDist::name() const {
  std::ostringstream os;
  os << "exponential(rate=" << rate_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Uniform
// ---------------------------------------------------------------------------

UniformDist::UniformDist(double a, double b) : a_(a), b_(b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b,
          "uniform endpoints must be finite with a < b");
}

double UniformDist::cdf(double x) const {
  if (x <= a_) return 0.0;
  if (x >= b_) return 1.0;
  return (x - a_) / (b_ - a_);
}

double UniformDist::pdf(double x) const {
  if (x < a_ || x > b_) return 0.0;
  return 1.0 / (b_ - a_);
}

double UniformDist::quantile(double u) const {
  require(u >= 0.0 && u <= 1.0, "quantile argument must lie in [0, 1]");
  return a_ + (b_ - a_) * u;
}

std::string UniformDist::name() const {
  std::ostringstream os;
  os << "uniform[" << a_ << "," << b_ << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Weibull
// ---------------------------------------------------------------------------

WeibullDist::WeibullDist(double shape, double scale)
    : shape_(shape), scale_(scale) {
  require(shape > 0.0 && std::isfinite(shape), "weibull shape must be > 0");
  require(scale > 0.0 && std::isfinite(scale), "weibull scale must be > 0");
}

double WeibullDist::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-std::pow(x / scale_, shape_));
}

double WeibullDist::pdf(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (shape_ < 1.0) return std::numeric_limits<double>::infinity();
    if (shape_ == 1.0) return 1.0 / scale_;
    return 0.0;
  }
  const double z = x / scale_;
  return (shape_ / scale_) * std::pow(z, shape_ - 1.0) *
         std::exp(-std::pow(z, shape_));
}

double WeibullDist::quantile(double u) const {
  require(u >= 0.0 && u <= 1.0, "quantile argument must lie in [0, 1]");
  if (u >= 1.0) return std::numeric_limits<double>::infinity();
  return scale_ * std::pow(-std::log1p(-u), 1.0 / shape_);
}

std::string WeibullDist::name() const {
  std::ostringstream os;
  os << "weibull(shape=" << shape_ << ",scale=" << scale_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Truncated exponential
// ---------------------------------------------------------------------------

TruncatedExponentialDist::TruncatedExponentialDist(double rate, double cap)
    : rate_(rate), cap_(cap) {
  require(rate > 0.0 && std::isfinite(rate), "rate must be > 0");
  require(cap > 0.0 && std::isfinite(cap), "cap must be finite and > 0");
  norm_ = -std::expm1(-rate_ * cap_);
}

double TruncatedExponentialDist::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= cap_) return 1.0;
  return -std::expm1(-rate_ * x) / norm_;
}

double TruncatedExponentialDist::pdf(double x) const {
  if (x < 0.0 || x > cap_) return 0.0;
  return rate_ * std::exp(-rate_ * x) / norm_;
}

double TruncatedExponentialDist::quantile(double u) const {
  require(u >= 0.0 && u <= 1.0, "quantile argument must lie in [0, 1]");
  return std::min(cap_, -std::log1p(-u * norm_) / rate_);
}

std::string TruncatedExponentialDist::name() const {
  std::ostringstream os;
  os << "truncated-exponential(rate=" << rate_ << ",cap=" << cap_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Equal revenue
// ---------------------------------------------------------------------------

EqualRevenueDist::EqualRevenueDist(double cap) : cap_(cap) {
  require(cap > 1.0, "equal-revenue cap must exceed the support minimum 1");
}

double EqualRevenueDist::cdf(double x) const {
  if (x < 1.0) return 0.0;
  if (x >= cap_) return 1.0;
  return 1.0 - 1.0 / x;
}

double EqualRevenueDist::pdf(double x) const {
  if (x < 1.0 || x >= cap_) return 0.0;
  return 1.0 / (x * x);
}

double EqualRevenueDist::quantile(double u) const {
  require(u >= 0.0 && u <= 1.0, "quantile argument must lie in [0, 1]");
  if (u >= 1.0) return cap_;
  return std::min(cap_, 1.0 / (1.0 - u));
}

bool EqualRevenueDist::max_integrable() const {
  return std::isfinite(cap_);
}

std::string EqualRevenueDist::name() const {
  std::ostringstream os;
  if (std::isfinite(cap_)) {
    os << "equal-revenue(cap=" << cap_ << ")";
  } else {
    os << "equal-revenue";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Piecewise-linear cumulative hazard
// ---------------------------------------------------------------------------

PiecewiseLinearH::PiecewiseLinearH(std::vector<double> breakpoints,
                                   std::vector<double> slopes)
    : x_(std::move(breakpoints)), a_(std::move(slopes)) {
  require(x_.size() >= 2, "need at least one segment");
  require(a_.size() + 1 == x_.size(),
          "need exactly one slope per segment");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    require(std::isfinite(x_[i]), "breakpoints must be finite");
    if (i > 0) require(x_[i] > x_[i - 1], "breakpoints must be ascending");
  }
  double total = 0.0;
  haz_at_.resize(x_.size());
  haz_at_[0] = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) {
    require(std::isfinite(a_[i]) && a_[i] >= 0.0,
            "slopes must be finite and non-negative");
    total += a_[i] * (x_[i + 1] - x_[i]);
    haz_at_[i + 1] = total;
  }
  require(total > 0.0, "cumulative hazard must be positive somewhere");
}

double PiecewiseLinearH::cumulative_hazard(double x) const {
  if (x <= x_.front()) return 0.0;
  if (x >= x_.back()) return haz_at_.back();
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t seg = static_cast<std::size_t>(it - x_.begin()) - 1;
  return haz_at_[seg] + a_[seg] * (x - x_[seg]);
}

double PiecewiseLinearH::hazard(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t seg =
      it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  if (seg >= a_.size()) seg = a_.size() - 1;
  return a_[seg];
}

double PiecewiseLinearH::cdf(double x) const {
  if (x < x_.front()) return 0.0;
  if (x >= x_.back()) return 1.0;
  return -std::expm1(-cumulative_hazard(x));
}

double PiecewiseLinearH::pdf(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  return hazard(x) * std::exp(-cumulative_hazard(x));
}

double PiecewiseLinearH::quantile(double u) const {
  require(u >= 0.0 && u <= 1.0, "quantile argument must lie in [0, 1]");
  if (u <= 0.0) return x_.front();
  const double target = -std::log1p(-u);  // H(x) = target
  if (target >= haz_at_.back()) return x_.back();
  std::size_t seg = 0;
  while (seg + 1 < haz_at_.size() && haz_at_[seg + 1] < target) ++seg;
  // Slope zero segments carry no mass, so target falls strictly inside a
  // positive-slope segment.
  return x_[seg] + (target - haz_at_[seg]) / a_[seg];
}

bool PiecewiseLinearH::convex(double tol) const {
  for (std::size_t i = 0; i + 1 < a_.size(); ++i) {
    if (a_[i] > a_[i + 1] + tol) return false;
  }
  return true;
}

std::string PiecewiseLinearH::name() const {
  std::ostringstream os;
  os << "piecewise-linear-hazard(" << a_.size() << " segments)";
  return os.str();
}

// ---------------------------------------------------------------------------
// Order statistics
// ---------------------------------------------------------------------------

double order_stat_cdf_from_point(double F, int r, int n) {
  require(n >= 1, "need at least one draw");
  require(r >= 1 && r <= n, "rank out of range: need 1 <= r <= n");
  require(F >= 0.0 && F <= 1.0, "cdf value must lie in [0, 1]");
  if (F <= 0.0) return 0.0;
  if (F >= 1.0) return 1.0;

  // P[X_{r:n} <= x] = P[at most r-1 draws exceed x]
  //                 = sum_{j=n-r+1}^{n} C(n,j) F^j (1-F)^(n-j).
  const double logF = std::log(F);
  const double log1mF = std::log1p(-F);
  double sum = 0.0;
  for (int j = n - r + 1; j <= n; ++j) {
    const double logc = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                        std::lgamma(n - j + 1.0);
    sum += std::exp(logc + j * logF + (n - j) * log1mF);
  }
  return std::min(sum, 1.0);
}

double order_stat_cdf(const DiscreteDist& dist, int r, int n, double x) {
  return order_stat_cdf_from_point(dist.cdf(x), r, n);
}

double order_stat_cdf(const ContinuousDist& dist, int r, int n, double x) {
  return order_stat_cdf_from_point(dist.cdf(x), r, n);
}

double expected_order_stat(const DiscreteDist& dist, int r, int n) {
  require(n >= 1, "need at least one draw");
  require(r >= 1 && r <= n, "rank out of range: need 1 <= r <= n");
  double e = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double cur = order_stat_cdf_from_point(dist.cdf_at(i), r, n);
    e += dist.value(i) * (cur - prev);
    prev = cur;
  }
  return e;
}

double expected_order_stat(const ContinuousDist& dist, int r, int n) {
  require(n >= 1, "need at least one draw");
  require(r >= 1 && r <= n, "rank out of range: need 1 <= r <= n");
  const double base = dist.lo();
  require(std::isfinite(base),
          "expected_order_stat requires a finite lower endpoint");
  if (r == 1 && !dist.max_integrable()) {
    throw numeric_error(
        "expected order statistic diverges: untruncated heavy tail at rank 1");
  }
  const double top = effective_hi(dist, 1e-12);
  auto integrand = [&](double x) {
    return 1.0 - order_stat_cdf_from_point(dist.cdf(x), r, n);
  };
  // E[X_{r:n}] = lo + integral over the support of the survival function.
  return base + integrate(integrand, base, top, 1e-12, 1e-9);
}

// ---------------------------------------------------------------------------
// Virtual values
// ---------------------------------------------------------------------------

double virtual_value_discrete(const DiscreteDist& dist, std::size_t i) {
  require(i < dist.size(), "support index out of range");
  require(dist.prob(i) > 0.0,
          "virtual value needs positive mass at the point");
  if (i + 1 == dist.size()) return dist.value(i);
  const double gap = dist.value(i + 1) - dist.value(i);
  return dist.value(i) - gap * dist.upper_tail_at(i) / dist.prob(i);
}

double virtual_value_continuous(const ContinuousDist& dist, double x) {
  const double f = dist.pdf(x);
  require(f > 0.0, "virtual value needs positive density at the point");
  return x - (1.0 - dist.cdf(x)) / f;
}

// ---------------------------------------------------------------------------
// Hazard monotonicity
// ---------------------------------------------------------------------------

MhrReport check_mhr(const ContinuousDist& dist, int grid_size, double tol) {
  require(grid_size >= 2, "grid must have at least two points");
  MhrReport rep;
  rep.is_mhr = true;

  // Sample at quantiles rather than on an even x-grid: the tail mass at the
  // last sample stays >= 1/(grid_size+1), so 1-F is computed far from the
  // cancellation regime and the hazard values carry ~1e-13 relative noise.
  double prev_h = -std::numeric_limits<double>::infinity();
  double prev_x = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid_size; ++i) {
    const double u = static_cast<double>(i) / (grid_size + 1);
    const double x = dist.quantile(u);
    if (!(x > prev_x)) continue;  // atoms / clamped quantiles repeat points
    const double tail = 1.0 - dist.cdf(x);
    if (tail <= 0.0) break;
    const double h = dist.pdf(x) / tail;
    if (!std::isfinite(h)) continue;
    if (std::isfinite(prev_h)) {
      const double drop =
          (prev_h - h) / std::max({1.0, std::abs(prev_h), std::abs(h)});
      if (drop > rep.max_violation) {
        rep.max_violation = drop;
        rep.witness_x_lo = prev_x;
        rep.witness_x_hi = x;
        if (drop > tol) rep.is_mhr = false;
      }
    }
    prev_h = h;
    prev_x = x;
  }
  return rep;
}

double effective_hi(const ContinuousDist& dist, double tail_mass) {
  const double b = dist.hi();
  if (std::isfinite(b)) return b;
  double x = std::max(dist.lo(), 1.0);
  while (1.0 - dist.cdf(x) >= tail_mass) {
    x *= 2.0;
    if (x > 1e300) {
      throw numeric_error("effective_hi: tail does not reach the target mass");
    }
  }
  // Bisect for the smallest such x (not required to be tight, but keeps the
  // integration range small).
  double a = dist.lo();
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (a + x);
    if (1.0 - dist.cdf(mid) < tail_mass) {
      x = mid;
    } else {
      a = mid;
    }
  }
  return x;
}

}  // namespace dynauct
