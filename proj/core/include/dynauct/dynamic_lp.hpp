#pragma once

#include <map>
#include <vector>

#include "dynauct/dist.hpp"
#include "dynauct/lp.hpp"

namespace dynauct {

/// How buyer participation is protected.
///  - kExPost: every stage's interim utility (expectation over the other
///    buyers' current reports) is non-negative for every history and value.
///  - kExAnte: the expected continuation utility from every stage onward is
///    non-negative for every history and current value.
enum class IrMode { kExPost, kExAnte };

/// A buyer's value evolution over the selling stages. Stage 1 draws from an
/// unconditional distribution; every stage k >= 2 draws from a distribution
/// conditioned on that buyer's own earlier values. All buyers share the same
/// process and draw independently of each other.
class ValueProcess {
 public:
  ValueProcess() = default;

  /// Process whose stages draw independently from per-stage distributions.
  static ValueProcess independent(std::vector<DiscreteDist> stage_dists);

  /// Correlated process: conditionals[k-2] maps each value history
  /// (v_1, ..., v_{k-1}) to the stage-k distribution. Every history reachable
  /// with positive probability must have an entry; entries may also be given
  /// for histories only reachable through misreports, where the revenue LP
  /// needs deviation-continuation weights.
  static ValueProcess correlated(
      DiscreteDist stage1,
      std::vector<std::map<std::vector<double>, DiscreteDist>> conditionals);

  int stages() const { return stages_; }
  bool independent_stages() const { return independent_; }

  /// Distribution of the next value (stage history.size()+1) given a buyer's
  /// own value history. Throws domain_error when the process does not define
  /// a conditional for that history.
  const DiscreteDist& conditional(const std::vector<double>& history) const;

  /// Probability of drawing `value` next given the history; 0 when the value
  /// lies outside the conditional's support.
  double transition_prob(const std::vector<double>& history,
                         double value) const;

  /// All values a buyer can report at stage k (1-based): the union of the
  /// conditional supports at that stage, positive-probability values only,
  /// ascending.
  const std::vector<double>& stage_support(int k) const;

  /// Marginal distribution of the stage-k value (mixture over histories).
  DiscreteDist stage_marginal(int k) const;

 private:
  int stages_ = 0;
  bool independent_ = false;
  std::vector<DiscreteDist> marginals_;  // independent mode, one per stage
  std::vector<DiscreteDist> stage1_;     // correlated mode, singleton
  std::vector<std::map<std::vector<double>, DiscreteDist>> conditionals_;
  std::vector<std::vector<double>> supports_;
};

/// One multi-stage selling problem: n buyers with i.i.d. value processes,
/// m = process.stages() items sold one per stage.
struct DynamicInstance {
  int buyers = 1;
  int stages = 1;  // must equal process.stages()
  ValueProcess process;
  IrMode ir_mode = IrMode::kExPost;
};

/// Index arithmetic for joint report profiles. A stage-k profile records all
/// buyers' reports for stages 1 through k. Profile ids satisfy
///   id = parent_id * combos(k) + combo
/// where combo encodes the stage-k reports with buyer 0 most significant:
///   combo = ((a_0 * s_k + a_1) * s_k + ...) * s_k + a_{n-1},
/// a_i being the index of buyer i's report in support(k).
class ProfileSpace {
 public:
  ProfileSpace(const ValueProcess& process, int buyers);

  int stages() const { return stages_; }
  int buyers() const { return buyers_; }
  const std::vector<double>& support(int k) const;
  int support_size(int k) const;

  /// Number of per-stage report combinations, |support(k)|^n.
  long combos(int k) const;
  /// Number of stage-k profiles; profiles(0) == 1 (the empty history).
  long profiles(int k) const;

  long parent(int k, long id) const { return id / combos(k); }
  long child(int k, long parent_id, const std::vector<int>& stage_idx) const;

  /// Support index of buyer i's stage-j report within the stage-k profile.
  int value_index(int k, long id, int i, int j) const;
  double value(int k, long id, int i, int j) const;
  /// Buyer i's report history (stages 1..k) inside the stage-k profile.
  std::vector<double> history(int k, long id, int i) const;

  /// Joint probability of all buyers truthfully drawing this stage-k profile;
  /// 0 for profiles containing impossible transitions.
  double probability(int k, long id) const;

  const ValueProcess& process() const { return process_; }

 private:
  ValueProcess process_;
  int stages_ = 0;
  int buyers_ = 0;
  std::vector<long> combos_;    // per stage, 1-based at index k-1
  std::vector<long> profiles_;  // profiles_[k] = stage-k profile count
};

/// A direct mechanism on the report space: allocation probabilities and
/// payments for every buyer at every joint report profile.
/// x[k-1][q][i] and p[k-1][q][i] address buyer i at the stage-k profile q
/// (ProfileSpace ordering).
struct MechanismSolution {
  std::vector<std::vector<std::vector<double>>> x;
  std::vector<std::vector<std::vector<double>>> p;
  double objective = 0.0;
};

/// The assembled revenue-maximization LP. Payments enter the objective and
/// every constraint only through their expectation over the other buyers'
/// current-stage reports, so the LP carries one aggregated payment column per
/// (stage, past profile, buyer, own value) instead of one per full profile;
/// solve_lp expands solutions back to full payment tables.
struct DynamicLp {
  LpProblem lp;
  DynamicInstance instance;
  ProfileSpace space;

  /// Column ids. x columns come first, ordered by (stage, profile, buyer);
  /// payment columns follow, ordered by (stage, past profile, buyer, value).
  std::vector<long> x_offset;    // per stage k, index k-1
  std::vector<long> pay_offset;  // per stage k, index k-1

  int x_col(int k, long q, int i) const;
  int pay_col(int k, long past, int i, int value_idx) const;

  /// Row ids: incentive rows first (stage, past profile, buyer, true value,
  /// reported value), then participation rows (stage, past profile, buyer,
  /// value), then per-profile supply rows (stage, profile).
  long ic_rows = 0, ir_rows = 0, supply_rows = 0;
};

/// Violation summary for a mechanism: the largest shortfall in each
/// constraint family (0 when satisfied) and their maximum.
struct VerificationReport {
  double max_ic = 0.0;
  double max_ir = 0.0;
  double max_feasibility = 0.0;
  double max_violation = 0.0;
};

/// Assembles the revenue LP for the instance: one incentive row per (buyer,
/// stage, past profile, true value, deviation), participation rows per the
/// instance's IR mode, unit-supply rows per profile, and box bounds on the
/// allocation variables. Throws size_error when the LP would exceed
/// `nonzero_cap` matrix entries, domain_error on malformed instances.
DynamicLp build_lp(const DynamicInstance& instance,
                   std::size_t nonzero_cap = 500'000);

/// Solves the assembled LP to optimality and expands the aggregated payment
/// columns into full payment tables. The LP is always feasible (the zero
/// mechanism); an unbounded program indicates a construction bug and throws
/// numeric_error.
MechanismSolution solve_lp(const DynamicLp& built, double tolerance = 1e-7);

/// Recomputes every constraint of the instance's program directly from the
/// mechanism tables and reports the worst violations. Solver output must
/// come back with max_violation <= 1e-6. Throws domain_error when the tables
/// are not dimensioned for the instance.
VerificationReport verify_mechanism(const DynamicInstance& instance,
                                    const MechanismSolution& solution);

/// Social-welfare upper bound on any mechanism's revenue: the sum over
/// stages of the expected highest value among the n buyers.
double welfare_bound(const DynamicInstance& instance);

}  // namespace dynauct
