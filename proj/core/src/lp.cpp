#include "dynauct/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dynauct/errors.hpp"

namespace dynauct {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// LpBuilder
// ---------------------------------------------------------------------------

int LpBuilder::add_variable(double lower, double upper, double objective) {
  if (std::isnan(lower) || std::isnan(upper) || !std::isfinite(objective)) {
    throw domain_error("variable bounds must not be NaN; objective finite");
  }
  if (lower > upper) throw domain_error("variable lower bound above upper");
  obj_.push_back(objective);
  lb_.push_back(lower);
  ub_.push_back(upper);
  return static_cast<int>(obj_.size()) - 1;
}

int LpBuilder::add_row(RowSense sense, double rhs,
                       const std::vector<std::pair<int, double>>& entries) {
  if (!std::isfinite(rhs)) throw domain_error("row rhs must be finite");
  const int row = static_cast<int>(rhs_.size());
  rhs_.push_back(rhs);
  sense_.push_back(sense);

  // Sum duplicate columns; drop exact zeros.
  thread_local std::vector<std::pair<int, double>> sorted;
  sorted.assign(entries.begin(), entries.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const int col = sorted[i].first;
    if (col < 0 || col >= num_variables()) {
      throw domain_error("row references an unknown variable");
    }
    double sum = 0.0;
    while (i < sorted.size() && sorted[i].first == col) sum += sorted[i++].second;
    if (!std::isfinite(sum)) throw domain_error("row coefficient not finite");
    if (sum != 0.0) sorted[out++] = {col, sum};
  }
  for (std::size_t i = 0; i < out; ++i) {
    entry_row_.push_back(row);
    entry_col_.push_back(sorted[i].first);
    entry_val_.push_back(sorted[i].second);
  }
  return row;
}

LpProblem LpBuilder::build() const {
  LpProblem lp;
  lp.num_rows = num_rows();
  lp.objective = obj_;
  lp.lower = lb_;
  lp.upper = ub_;
  lp.rhs = rhs_;
  lp.sense = sense_;

  const int ncols = num_variables();
  const std::size_t nnz = entry_col_.size();
  lp.col_start.assign(ncols + 1, 0);
  for (std::size_t k = 0; k < nnz; ++k) lp.col_start[entry_col_[k] + 1]++;
  for (int c = 0; c < ncols; ++c) lp.col_start[c + 1] += lp.col_start[c];
  lp.row_index.resize(nnz);
  lp.coef.resize(nnz);
  std::vector<int> fill(lp.col_start.begin(), lp.col_start.end() - 1);
  // Entries were appended row by row, so each column receives its rows in
  // ascending order.
  for (std::size_t k = 0; k < nnz; ++k) {
    const int c = entry_col_[k];
    lp.row_index[fill[c]] = entry_row_[k];
    lp.coef[fill[c]] = entry_val_[k];
    fill[c]++;
  }
  return lp;
}

// ---------------------------------------------------------------------------
// Bounded-variable revised simplex with a product-form inverse.
// ---------------------------------------------------------------------------

namespace {

constexpr double kPivotTol = 1e-10;  // smallest usable ratio-test pivot
constexpr double kDualTol = 1e-9;    // reduced-cost significance
constexpr double kFeasTol = 1e-9;    // bound violation significance
constexpr int kRebuildEvery = 500;   // pivots between representation rebuilds

enum class VarStatus : unsigned char { kBasic, kAtLower, kAtUpper, kFreeZero };

struct Eta {
  int pivot_row = -1;
  double inv_pivot = 0.0;
  std::vector<std::pair<int, double>> off;  // (row, w_row) with row != pivot
};

class Simplex {
 public:
  Simplex(const LpProblem& lp, double tol) : lp_(lp), tol_(tol) {
    m_ = lp.num_rows;
    nstruct_ = lp.num_cols();
    ntotal_ = nstruct_ + m_;

    lb_.resize(ntotal_);
    ub_.resize(ntotal_);
    cost_.assign(ntotal_, 0.0);
    for (int j = 0; j < nstruct_; ++j) {
      lb_[j] = lp.lower[j];
      ub_[j] = lp.upper[j];
      cost_[j] = lp.objective[j];
    }
    for (int r = 0; r < m_; ++r) {
      switch (lp.sense[r]) {
        case RowSense::kLe:
          lb_[nstruct_ + r] = 0.0;
          ub_[nstruct_ + r] = kInf;
          break;
        case RowSense::kGe:
          lb_[nstruct_ + r] = -kInf;
          ub_[nstruct_ + r] = 0.0;
          break;
        case RowSense::kEq:
          lb_[nstruct_ + r] = 0.0;
          ub_[nstruct_ + r] = 0.0;
          break;
      }
    }

    status_.assign(ntotal_, VarStatus::kAtLower);
    xval_.assign(ntotal_, 0.0);
    for (int j = 0; j < nstruct_; ++j) {
      if (std::isfinite(lb_[j])) {
        status_[j] = VarStatus::kAtLower;
        xval_[j] = lb_[j];
      } else if (std::isfinite(ub_[j])) {
        status_[j] = VarStatus::kAtUpper;
        xval_[j] = ub_[j];
      } else {
        status_[j] = VarStatus::kFreeZero;
        xval_[j] = 0.0;
      }
    }
    basic_of_row_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      basic_of_row_[r] = nstruct_ + r;
      status_[nstruct_ + r] = VarStatus::kBasic;
    }

    wcol_.assign(m_, 0.0);
    y_.assign(m_, 0.0);
  }

  SimplexResult run() {
    compute_basic_values();
    phase1_if_needed();
    optimize();

    SimplexResult res;
    res.x.assign(xval_.begin(), xval_.begin() + nstruct_);
    res.row_dual = y_;
    res.objective = objective_value();
    res.iterations = iterations_;
    return res;
  }

 private:
  // -- column access ---------------------------------------------------------

  template <typename Fn>
  void for_column(int var, Fn&& fn) const {
    if (var < nstruct_) {
      for (int k = lp_.col_start[var]; k < lp_.col_start[var + 1]; ++k) {
        fn(lp_.row_index[k], lp_.coef[k]);
      }
    } else {
      fn(var - nstruct_, 1.0);
    }
  }

  int column_nnz(int var) const {
    if (var >= nstruct_) return 1;
    return lp_.col_start[var + 1] - lp_.col_start[var];
  }

  // -- product-form inverse --------------------------------------------------

  void ftran(std::vector<double>& z) const {
    for (const Eta& e : etas_) {
      const double zr = z[e.pivot_row];
      if (zr == 0.0) continue;
      const double scaled = zr * e.inv_pivot;
      z[e.pivot_row] = scaled;
      for (const auto& [row, w] : e.off) z[row] -= w * scaled;
    }
  }

  void btran(std::vector<double>& y) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double dot = 0.0;
      for (const auto& [row, w] : it->off) dot += w * y[row];
      y[it->pivot_row] = (y[it->pivot_row] - dot) * it->inv_pivot;
    }
  }

  void append_eta(int pivot_row, const std::vector<double>& w) {
    Eta e;
    e.pivot_row = pivot_row;
    e.inv_pivot = 1.0 / w[pivot_row];
    for (int r = 0; r < m_; ++r) {
      if (r != pivot_row && w[r] != 0.0) e.off.emplace_back(r, w[r]);
    }
    etas_.push_back(std::move(e));
  }

  /// Re-derives the product-form inverse from the current basis: unit slack
  /// columns first (no fill), then structural columns sparsest-first.
  void rebuild() {
    std::vector<int> vars(basic_of_row_);
    std::stable_sort(vars.begin(), vars.end(), [&](int a, int b) {
      const bool sa = a >= nstruct_, sb = b >= nstruct_;
      if (sa != sb) return sa;  // slacks first
      const int na = column_nnz(a), nb = column_nnz(b);
      if (na != nb) return na < nb;
      return a < b;
    });

    etas_.clear();
    std::vector<char> used(m_, 0);
    std::vector<int> new_basic(m_, -1);
    std::vector<double> w(m_, 0.0);
    std::vector<int> dropped;

    for (int v : vars) {
      std::fill(w.begin(), w.end(), 0.0);
      for_column(v, [&](int r, double a) { w[r] = a; });
      ftran(w);
      int pr = -1;
      double best = 1e-11;
      for (int r = 0; r < m_; ++r) {
        if (!used[r] && std::abs(w[r]) > best) {
          best = std::abs(w[r]);
          pr = r;
        }
      }
      if (pr < 0) {
        dropped.push_back(v);  // numerically dependent column
        continue;
      }
      append_eta(pr, w);
      used[pr] = 1;
      new_basic[pr] = v;
    }

    // Dependent columns leave the basis; their rows get slacks back.
    for (int v : dropped) {
      if (std::isfinite(lb_[v])) {
        status_[v] = VarStatus::kAtLower;
        xval_[v] = lb_[v];
      } else if (std::isfinite(ub_[v])) {
        status_[v] = VarStatus::kAtUpper;
        xval_[v] = ub_[v];
      } else {
        status_[v] = VarStatus::kFreeZero;
        xval_[v] = 0.0;
      }
    }
    for (int r = 0; r < m_ && !dropped.empty(); ++r) {
      if (new_basic[r] >= 0) continue;
      const int sv = nstruct_ + r;
      std::fill(w.begin(), w.end(), 0.0);
      w[r] = 1.0;
      ftran(w);
      int pr = -1;
      double best = 1e-11;
      for (int rr = 0; rr < m_; ++rr) {
        if (!used[rr] && std::abs(w[rr]) > best) {
          best = std::abs(w[rr]);
          pr = rr;
        }
      }
      if (pr < 0) throw numeric_error("simplex basis repair failed");
      append_eta(pr, w);
      used[pr] = 1;
      new_basic[pr] = sv;
      status_[sv] = VarStatus::kBasic;
    }

    basic_of_row_ = new_basic;
    pivots_since_rebuild_ = 0;
  }

  void compute_basic_values() {
    std::vector<double> z(lp_.rhs);
    for (int j = 0; j < ntotal_; ++j) {
      if (status_[j] == VarStatus::kBasic || xval_[j] == 0.0) continue;
      const double vj = xval_[j];
      for_column(j, [&](int r, double a) { z[r] -= a * vj; });
    }
    ftran(z);
    for (int r = 0; r < m_; ++r) xval_[basic_of_row_[r]] = z[r];
  }

  double objective_value() const {
    double v = 0.0;
    for (int j = 0; j < ntotal_; ++j) v += cost_[j] * xval_[j];
    return v;
  }

  // -- pricing ----------------------------------------------------------------

  void compute_duals() {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (int r = 0; r < m_; ++r) y_[r] = cost_[basic_of_row_[r]];
    btran(y_);
  }

  double reduced_cost(int j) const {
    double d = cost_[j];
    for_column(j, [&](int r, double a) { d -= a * y_[r]; });
    return d;
  }

  bool eligible(int j, double d) const {
    switch (status_[j]) {
      case VarStatus::kBasic:
        return false;
      case VarStatus::kAtLower:
        return ub_[j] > lb_[j] && d > kDualTol * (1.0 + std::abs(cost_[j]));
      case VarStatus::kAtUpper:
        return ub_[j] > lb_[j] && d < -kDualTol * (1.0 + std::abs(cost_[j]));
      case VarStatus::kFreeZero:
        return std::abs(d) > kDualTol * (1.0 + std::abs(cost_[j]));
    }
    return false;
  }

  /// Picks the entering variable; returns -1 at optimality.
  int price(bool bland, double& d_out) {
    compute_duals();
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < ntotal_; ++j) {
      if (status_[j] == VarStatus::kBasic) continue;
      const double d = reduced_cost(j);
      if (!eligible(j, d)) continue;
      if (bland) {
        d_out = d;
        return j;  // smallest index wins
      }
      const double score = std::abs(d);
      if (score > best_score) {
        best_score = score;
        best = j;
        d_out = d;
      }
    }
    return best;
  }

  // -- iteration ---------------------------------------------------------------

  enum class StepResult { kPivoted, kBoundFlip, kOptimal };

  StepResult step(bool bland) {
    double d = 0.0;
    const int q = price(bland, d);
    if (q < 0) return StepResult::kOptimal;

    const double sigma =
        (status_[q] == VarStatus::kAtUpper || (status_[q] == VarStatus::kFreeZero && d < 0.0))
            ? -1.0
            : 1.0;

    std::fill(wcol_.begin(), wcol_.end(), 0.0);
    for_column(q, [&](int r, double a) { wcol_[r] = a; });
    ftran(wcol_);

    // Ratio test, two passes: find the tightest step, then among blockers
    // within a feasibility tolerance pick the largest pivot (or the smallest
    // variable index in anti-cycling mode).
    const double own_limit =
        (std::isfinite(lb_[q]) && std::isfinite(ub_[q])) ? ub_[q] - lb_[q] : kInf;
    double t_min = own_limit;
    for (int r = 0; r < m_; ++r) {
      const double w = wcol_[r];
      if (std::abs(w) <= kPivotTol) continue;
      const int bv = basic_of_row_[r];
      const double move = sigma * w;  // basic value changes by -move * t
      double bound;
      if (move > 0.0) {
        bound = lb_[bv];
        if (!std::isfinite(bound)) continue;
      } else {
        bound = ub_[bv];
        if (!std::isfinite(bound)) continue;
      }
      const double t = (xval_[bv] - bound) / move;
      if (t < t_min) t_min = t;
    }

    if (!std::isfinite(t_min)) {
      throw numeric_error("linear program is unbounded");
    }

    int r_leave = -1;
    double leave_pivot = 0.0;
    double t_star = std::max(t_min, 0.0);
    const double t_cut = t_min + kFeasTol;
    for (int r = 0; r < m_; ++r) {
      const double w = wcol_[r];
      if (std::abs(w) <= kPivotTol) continue;
      const int bv = basic_of_row_[r];
      const double move = sigma * w;
      double bound;
      if (move > 0.0) {
        bound = lb_[bv];
        if (!std::isfinite(bound)) continue;
      } else {
        bound = ub_[bv];
        if (!std::isfinite(bound)) continue;
      }
      const double t = (xval_[bv] - bound) / move;
      if (t > t_cut) continue;
      if (bland) {
        if (r_leave < 0 || bv < basic_of_row_[r_leave]) {
          r_leave = r;
          leave_pivot = w;
        }
      } else if (std::abs(w) > std::abs(leave_pivot)) {
        r_leave = r;
        leave_pivot = w;
      }
    }

    if (r_leave >= 0) {
      // Exact blocking step for the chosen row.
      const int bv = basic_of_row_[r_leave];
      const double move = sigma * leave_pivot;
      const double bound = move > 0.0 ? lb_[bv] : ub_[bv];
      t_star = std::max((xval_[bv] - bound) / move, 0.0);
    }
    if (r_leave < 0 || own_limit <= t_star) {
      // The entering variable hits its own opposite bound first: bound flip.
      const double t = own_limit;
      for (int r = 0; r < m_; ++r) {
        if (wcol_[r] != 0.0) xval_[basic_of_row_[r]] -= sigma * wcol_[r] * t;
      }
      xval_[q] += sigma * t;
      status_[q] = status_[q] == VarStatus::kAtLower ? VarStatus::kAtUpper
                                                     : VarStatus::kAtLower;
      return StepResult::kBoundFlip;
    }

    for (int r = 0; r < m_; ++r) {
      if (wcol_[r] != 0.0) xval_[basic_of_row_[r]] -= sigma * wcol_[r] * t_star;
    }
    const int leaving = basic_of_row_[r_leave];
    const double move = sigma * leave_pivot;
    status_[leaving] = move > 0.0 ? VarStatus::kAtLower : VarStatus::kAtUpper;
    xval_[leaving] = move > 0.0 ? lb_[leaving] : ub_[leaving];

    xval_[q] += sigma * t_star;
    status_[q] = VarStatus::kBasic;
    basic_of_row_[r_leave] = q;
    append_eta(r_leave, wcol_);
    ++pivots_since_rebuild_;
    return StepResult::kPivoted;
  }

  void optimize() {
    const long max_iters =
        std::max<long>(200000, 60L * (static_cast<long>(m_) + nstruct_));
    const long stall_limit = 200 + m_ / 2;
    bool bland = false;
    long stall = 0;
    double last_obj = objective_value();
    int optimality_rounds = 0;

    while (true) {
      if (iterations_ >= max_iters) {
        throw numeric_error("simplex iteration limit exhausted");
      }
      if (pivots_since_rebuild_ >= kRebuildEvery) {
        rebuild();
        compute_basic_values();
      }
      const StepResult sr = step(bland);
      if (sr == StepResult::kOptimal) {
        // Guard against stale numerics: rebuild, recompute, re-price once.
        if (optimality_rounds++ >= 3) break;
        rebuild();
        compute_basic_values();
        compute_duals();
        double d = 0.0;
        if (price(false, d) < 0) break;
        continue;
      }
      ++iterations_;
      const double obj = objective_value();
      if (obj > last_obj + 1e-11 * (1.0 + std::abs(last_obj))) {
        stall = 0;
        bland = false;
      } else if (++stall > stall_limit) {
        bland = true;
      }
      last_obj = obj;
    }
    compute_duals();
  }

  // -- feasibility phase -------------------------------------------------------

  /// Repairs an infeasible starting basis by repeatedly solving a restricted
  /// program: every out-of-bounds variable is boxed between its true bound and
  /// its current value with a unit cost pulling it inward, all other bounds
  /// stay real. With that box the round objective equals the total
  /// infeasibility exactly, so a feasible program makes strict progress every
  /// round and a round without progress certifies infeasibility.
  void phase1_if_needed() {
    bool any = false;
    for (int r = 0; r < m_ && !any; ++r) {
      const int v = basic_of_row_[r];
      any = xval_[v] > ub_[v] + kFeasTol || xval_[v] < lb_[v] - kFeasTol;
    }
    if (!any) return;

    const std::vector<double> real_cost(cost_);
    const std::vector<double> real_lb(lb_), real_ub(ub_);
    double prev_violation = kInf;

    for (int round = 0;; ++round) {
      lb_ = real_lb;
      ub_ = real_ub;
      std::fill(cost_.begin(), cost_.end(), 0.0);
      double violation = 0.0;
      bool shifted = false;
      for (int j = 0; j < ntotal_; ++j) {
        const double over = xval_[j] - real_ub[j];
        const double under = real_lb[j] - xval_[j];
        if (over > kFeasTol) {
          violation += over;
          ub_[j] = xval_[j];  // cannot get worse
          lb_[j] = real_ub[j];  // pull down to the true bound, no further
          cost_[j] = -1.0;
          shifted = true;
        } else if (under > kFeasTol) {
          violation += under;
          lb_[j] = xval_[j];
          ub_[j] = real_lb[j];
          cost_[j] = 1.0;
          shifted = true;
        } else if (status_[j] != VarStatus::kBasic) {
          // Re-anchor nonbasic variables onto the true bound they sit at.
          if (std::isfinite(real_ub[j]) && xval_[j] >= real_ub[j] - kFeasTol) {
            status_[j] = VarStatus::kAtUpper;
            xval_[j] = real_ub[j];
          } else if (std::isfinite(real_lb[j]) &&
                     xval_[j] <= real_lb[j] + kFeasTol) {
            status_[j] = VarStatus::kAtLower;
            xval_[j] = real_lb[j];
          } else if (!std::isfinite(real_lb[j]) && !std::isfinite(real_ub[j])) {
            status_[j] = VarStatus::kFreeZero;
          } else if (std::isfinite(real_lb[j])) {
            status_[j] = VarStatus::kAtLower;
            xval_[j] = real_lb[j];
          } else {
            status_[j] = VarStatus::kAtUpper;
            xval_[j] = real_ub[j];
          }
        }
      }

      if (!shifted) break;
      if (violation >= prev_violation - 1e-12 * (1.0 + violation) ||
          round >= 1000) {
        cost_ = real_cost;
        lb_ = real_lb;
        ub_ = real_ub;
        throw numeric_error("linear program is infeasible");
      }
      prev_violation = violation;

      compute_basic_values();
      try {
        optimize();
      } catch (const numeric_error&) {
        cost_ = real_cost;
        lb_ = real_lb;
        ub_ = real_ub;
        throw numeric_error("no feasible point found (first phase failed)");
      }
    }

    cost_ = real_cost;
    rebuild();
    compute_basic_values();
  }

  const LpProblem& lp_;
  double tol_;
  int m_ = 0, nstruct_ = 0, ntotal_ = 0;
  std::vector<double> lb_, ub_, cost_;
  std::vector<VarStatus> status_;
  std::vector<double> xval_;
  std::vector<int> basic_of_row_;
  std::vector<Eta> etas_;
  int pivots_since_rebuild_ = 0;
  long iterations_ = 0;
  std::vector<double> wcol_, y_;
};

}  // namespace

SimplexResult simplex_solve(const LpProblem& lp, double tol) {
  if (lp.col_start.size() != static_cast<std::size_t>(lp.num_cols()) + 1 ||
      lp.rhs.size() != static_cast<std::size_t>(lp.num_rows) ||
      lp.sense.size() != static_cast<std::size_t>(lp.num_rows) ||
      lp.lower.size() != lp.objective.size() ||
      lp.upper.size() != lp.objective.size()) {
    throw domain_error("malformed linear program");
  }
  Simplex s(lp, tol);
  return s.run();
}

}  // namespace dynauct
