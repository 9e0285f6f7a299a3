#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace dynauct {

enum class RowSense { kLe, kGe, kEq };

/// A linear program in the form
///   maximize  objective . x
///   subject to  (A x)_r  <= | >= | =  rhs_r  per row,
///               lower_j <= x_j <= upper_j    per column,
/// with A stored column-major (CSC). Bounds may be infinite on either side.
struct LpProblem {
  int num_rows = 0;
  std::vector<int> col_start;   // size num_cols()+1
  std::vector<int> row_index;   // size nnz
  std::vector<double> coef;     // size nnz
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> rhs;
  std::vector<RowSense> sense;

  int num_cols() const { return static_cast<int>(objective.size()); }
  std::size_t num_nonzeros() const { return coef.size(); }
};

/// Row-wise incremental construction; duplicate column references within one
/// row are summed. build() emits the column-major form.
class LpBuilder {
 public:
  /// Returns the new variable's column index.
  int add_variable(double lower, double upper, double objective);
  /// Returns the new row's index.
  int add_row(RowSense sense, double rhs,
              const std::vector<std::pair<int, double>>& entries);

  int num_variables() const { return static_cast<int>(obj_.size()); }
  int num_rows() const { return static_cast<int>(rhs_.size()); }
  std::size_t num_nonzeros() const { return entry_col_.size(); }

  LpProblem build() const;

 private:
  std::vector<double> obj_, lb_, ub_;
  std::vector<double> rhs_;
  std::vector<RowSense> sense_;
  std::vector<int> entry_row_;
  std::vector<int> entry_col_;
  std::vector<double> entry_val_;
};

struct SimplexResult {
  std::vector<double> x;         // primal values per structural column
  std::vector<double> row_dual;  // y at optimality
  double objective = 0.0;
  long iterations = 0;
};

/// Deterministic bounded-variable revised simplex. Product-form updates with
/// periodic rebuilds of the basis representation; largest-reduced-cost
/// pricing, switching to smallest-index (anti-cycling) pricing while the
/// objective stalls. Infeasible starts go through a bound-shifting first
/// phase. Throws numeric_error when the problem is infeasible, unbounded,
/// or the iteration limit is exhausted.
SimplexResult simplex_solve(const LpProblem& lp, double tol = 1e-7);

}  // namespace dynauct
