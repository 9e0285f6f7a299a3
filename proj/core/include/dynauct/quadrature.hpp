#pragma once

#include <functional>
#include <vector>

namespace dynauct {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// Intervals are kept in a worst-error heap and bisected until the summed
/// error estimate drops below max(abs_tol, rel_tol * |integral|) or the
/// interval budget is exhausted. `breakpoints` seeds the initial partition
/// (useful when the integrand has known kinks); endpoints outside (a, b)
/// are ignored. When the range is many orders of magnitude wider than its
/// left edge, a geometric seed partition is added automatically so that
/// heavy-tailed integrands are resolved.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double abs_tol = 1e-12,
                                    double rel_tol = 1e-8,
                                    int max_intervals = 50000,
                                    const std::vector<double>& breakpoints = {});

/// As integrate_adaptive, but throws numeric_error when the tolerance
/// cannot be met within the budget.
double integrate(const std::function<double(double)>& f,
                 double a, double b,
                 double abs_tol = 1e-12,
                 double rel_tol = 1e-8,
                 const std::vector<double>& breakpoints = {});

}  // namespace dynauct
