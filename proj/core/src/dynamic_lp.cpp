#include "dynauct/dynamic_lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <utility>

#include "dynauct/errors.hpp"

namespace dynauct {

namespace {

constexpr long kProfileCap = 1'000'000'000'000L;  // sanity cap on profile ids

int index_in(const std::vector<double>& support, double v) {
  const auto it = std::lower_bound(support.begin(), support.end(), v);
  if (it == support.end() || *it != v) {
    throw domain_error("value not present in the stage support");
  }
  return static_cast<int>(it - support.begin());
}

}  // namespace

// ---------------------------------------------------------------------------
// ValueProcess
// ---------------------------------------------------------------------------

ValueProcess ValueProcess::independent(std::vector<DiscreteDist> stage_dists) {
  if (stage_dists.empty()) {
    throw domain_error("a value process needs at least one stage");
  }
  ValueProcess p;
  p.stages_ = static_cast<int>(stage_dists.size());
  p.independent_ = true;
  for (DiscreteDist& d : stage_dists) {
    p.marginals_.push_back(d.pruned());
    p.supports_.push_back(p.marginals_.back().values());
  }
  return p;
}

ValueProcess ValueProcess::correlated(
    DiscreteDist stage1,
    std::vector<std::map<std::vector<double>, DiscreteDist>> conditionals) {
  ValueProcess p;
  p.stages_ = static_cast<int>(conditionals.size()) + 1;
  p.independent_ = false;
  p.stage1_.push_back(stage1.pruned());
  p.supports_.push_back(p.stage1_.back().values());

  for (std::size_t level = 0; level < conditionals.size(); ++level) {
    std::map<std::vector<double>, DiscreteDist> pruned;
    std::vector<double> support;
    for (const auto& [hist, dist] : conditionals[level]) {
      if (hist.size() != level + 1) {
        throw domain_error("conditional history has the wrong length");
      }
      for (std::size_t j = 0; j < hist.size(); ++j) {
        index_in(p.supports_[j], hist[j]);  // throws on unknown value
      }
      DiscreteDist d = dist.pruned();
      support.insert(support.end(), d.values().begin(), d.values().end());
      pruned.emplace(hist, std::move(d));
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    if (support.empty()) {
      throw domain_error("a correlated stage has no conditional distributions");
    }
    p.conditionals_.push_back(std::move(pruned));
    p.supports_.push_back(std::move(support));
  }

  // Every positive-probability history must have a conditional.
  std::function<void(std::vector<double>&, int)> check = [&](std::vector<double>& hist,
                                                             int depth) {
    if (depth >= p.stages_) return;
    const DiscreteDist& d = p.conditional(hist);  // throws when missing
    for (double v : d.values()) {
      hist.push_back(v);
      check(hist, depth + 1);
      hist.pop_back();
    }
  };
  std::vector<double> hist;
  check(hist, 1);
  return p;
}

const DiscreteDist& ValueProcess::conditional(
    const std::vector<double>& history) const {
  const int stage = static_cast<int>(history.size()) + 1;
  if (stage < 1 || stage > stages_) {
    throw domain_error("history length does not match any stage");
  }
  if (independent_) return marginals_[stage - 1];
  if (stage == 1) return stage1_.front();
  const auto& level = conditionals_[stage - 2];
  const auto it = level.find(history);
  if (it == level.end()) {
    throw domain_error(
        "the value process defines no conditional distribution for a history "
        "required by the program");
  }
  return it->second;
}

double ValueProcess::transition_prob(const std::vector<double>& history,
                                     double value) const {
  const DiscreteDist& d = conditional(history);
  const auto& vals = d.values();
  const auto it = std::lower_bound(vals.begin(), vals.end(), value);
  if (it == vals.end() || *it != value) return 0.0;
  return d.prob(static_cast<std::size_t>(it - vals.begin()));
}

const std::vector<double>& ValueProcess::stage_support(int k) const {
  if (k < 1 || k > stages_) throw domain_error("stage out of range");
  return supports_[k - 1];
}

DiscreteDist ValueProcess::stage_marginal(int k) const {
  if (k < 1 || k > stages_) throw domain_error("stage out of range");
  if (independent_) return marginals_[k - 1];
  std::map<double, double> acc;
  std::function<void(std::vector<double>&, double, int)> walk =
      [&](std::vector<double>& hist, double prob, int stage) {
        const DiscreteDist& d = conditional(hist);
        for (std::size_t a = 0; a < d.size(); ++a) {
          if (stage == k) {
            acc[d.value(a)] += prob * d.prob(a);
          } else {
            hist.push_back(d.value(a));
            walk(hist, prob * d.prob(a), stage + 1);
            hist.pop_back();
          }
        }
      };
  std::vector<double> hist;
  walk(hist, 1.0, 1);
  std::vector<double> values, probs;
  for (const auto& [v, q] : acc) {
    values.push_back(v);
    probs.push_back(q);
  }
  // Guard against accumulated rounding: renormalize the trailing entry.
  double total = 0.0;
  for (double q : probs) total += q;
  if (!probs.empty() && std::abs(total - 1.0) < 1e-9) {
    probs.back() += 1.0 - total;
  }
  return DiscreteDist(std::move(values), std::move(probs));
}

// ---------------------------------------------------------------------------
// ProfileSpace
// ---------------------------------------------------------------------------

ProfileSpace::ProfileSpace(const ValueProcess& process, int buyers)
    : process_(process), stages_(process.stages()), buyers_(buyers) {
  if (buyers_ < 1) throw domain_error("need at least one buyer");
  if (stages_ < 1) throw domain_error("need at least one stage");
  profiles_.assign(stages_ + 1, 1);
  for (int k = 1; k <= stages_; ++k) {
    const long s = static_cast<long>(process_.stage_support(k).size());
    long c = 1;
    for (int i = 0; i < buyers_; ++i) {
      if (c > kProfileCap / s) throw size_error("report profile space too large");
      c *= s;
    }
    combos_.push_back(c);
    if (profiles_[k - 1] > kProfileCap / c) {
      throw size_error("report profile space too large");
    }
    profiles_[k] = profiles_[k - 1] * c;
  }
}

const std::vector<double>& ProfileSpace::support(int k) const {
  return process_.stage_support(k);
}

int ProfileSpace::support_size(int k) const {
  return static_cast<int>(process_.stage_support(k).size());
}

long ProfileSpace::combos(int k) const {
  if (k < 1 || k > stages_) throw domain_error("stage out of range");
  return combos_[k - 1];
}

long ProfileSpace::profiles(int k) const {
  if (k < 0 || k > stages_) throw domain_error("stage out of range");
  return profiles_[k];
}

long ProfileSpace::child(int k, long parent_id,
                         const std::vector<int>& stage_idx) const {
  const long s = support_size(k);
  long c = 0;
  for (int i = 0; i < buyers_; ++i) c = c * s + stage_idx[i];
  return parent_id * combos(k) + c;
}

int ProfileSpace::value_index(int k, long id, int i, int j) const {
  for (int t = k; t > j; --t) id /= combos(t);
  long c = id % combos(j);
  const long s = support_size(j);
  for (int b = buyers_ - 1; b > i; --b) c /= s;
  return static_cast<int>(c % s);
}

double ProfileSpace::value(int k, long id, int i, int j) const {
  return support(j)[value_index(k, id, i, j)];
}

std::vector<double> ProfileSpace::history(int k, long id, int i) const {
  std::vector<double> h(k);
  for (int j = 1; j <= k; ++j) h[j - 1] = value(k, id, i, j);
  return h;
}

double ProfileSpace::probability(int k, long id) const {
  double total = 1.0;
  for (int i = 0; i < buyers_ && total != 0.0; ++i) {
    std::vector<double> hist;
    for (int j = 1; j <= k; ++j) {
      const double v = value(k, id, i, j);
      const double q = process_.transition_prob(hist, v);
      total *= q;
      if (total == 0.0) break;
      hist.push_back(v);
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// LP assembly
// ---------------------------------------------------------------------------

int DynamicLp::x_col(int k, long q, int i) const {
  return static_cast<int>(x_offset[k - 1] + q * instance.buyers + i);
}

int DynamicLp::pay_col(int k, long past, int i, int value_idx) const {
  const long s = space.support_size(k);
  return static_cast<int>(pay_offset[k - 1] +
                          (past * instance.buyers + i) * s + value_idx);
}

namespace {

/// Positive-probability stage-k draws (support index, probability) for the
/// buyer whose report history is `hist`.
std::vector<std::pair<int, double>> stage_draws(const ProfileSpace& sp, int k,
                                                const std::vector<double>& hist) {
  const DiscreteDist& d = sp.process().conditional(hist);
  const std::vector<double>& support = sp.support(k);
  std::vector<std::pair<int, double>> out;
  out.reserve(d.size());
  for (std::size_t a = 0; a < d.size(); ++a) {
    out.emplace_back(index_in(support, d.value(a)), d.prob(a));
  }
  return out;
}

/// Enumerates the other buyers' joint stage-k draws given the past profile.
/// `fn(stage_idx, pw)` receives the per-buyer support indices (slot `buyer`
/// already holds the deviator's report) and the joint probability.
template <typename Fn>
void for_rival_draws(const ProfileSpace& sp, int k, long past, int buyer,
                     std::vector<int>& stage_idx, Fn&& fn) {
  const int n = sp.buyers();
  std::vector<std::vector<std::pair<int, double>>> draws(n);
  for (int o = 0; o < n; ++o) {
    if (o == buyer) continue;
    draws[o] = stage_draws(sp, k, sp.history(k - 1, past, o));
  }
  std::vector<int> pos(n, 0);
  while (true) {
    double pw = 1.0;
    for (int o = 0; o < n; ++o) {
      if (o == buyer) continue;
      stage_idx[o] = draws[o][pos[o]].first;
      pw *= draws[o][pos[o]].second;
    }
    fn(stage_idx, pw);
    int o = n - 1;
    while (o >= 0) {
      if (o == buyer) {
        --o;
        continue;
      }
      if (++pos[o] < static_cast<int>(draws[o].size())) break;
      pos[o] = 0;
      --o;
    }
    if (o < 0) break;
  }
}

/// Accumulates one report branch of a buyer's expected utility from stage k
/// onward: the buyer with true value `true_value` reports `report_idx` at
/// stage k and reports truthfully afterwards, with future values drawn from
/// the conditionals of the TRUE history. Emits
///   add_x(stage, profile, coefficient)  for allocation terms and
///   add_pay(stage, past profile, value index, coefficient) for payment
/// terms aggregated over the other buyers' current-stage draws.
struct BranchWalker {
  const ProfileSpace& sp;
  int buyer;
  std::function<void(int, long, double)> add_x;
  std::function<void(int, long, int, double)> add_pay;

  void report_branch(int k, long past, int report_idx, double true_value,
                     double sign, bool with_future) {
    add_pay(k, past, report_idx, -sign);
    std::vector<double> true_hist = sp.history(k - 1, past, buyer);
    true_hist.push_back(true_value);
    std::vector<int> stage_idx(sp.buyers(), 0);
    stage_idx[buyer] = report_idx;
    for_rival_draws(sp, k, past, buyer, stage_idx,
                    [&](const std::vector<int>& idx, double pw) {
                      const long q = sp.child(k, past, idx);
                      add_x(k, q, sign * pw * true_value);
                      if (with_future && k < sp.stages()) {
                        truthful_tail(k + 1, q, true_hist, sign * pw);
                      }
                    });
  }

 private:
  void truthful_tail(int j, long past, std::vector<double>& true_hist,
                     double w) {
    std::vector<int> stage_idx(sp.buyers(), 0);
    for (const auto& [a, pu] : stage_draws(sp, j, true_hist)) {
      add_pay(j, past, a, -w * pu);
      const double u = sp.support(j)[a];
      stage_idx[buyer] = a;
      true_hist.push_back(u);
      for_rival_draws(sp, j, past, buyer, stage_idx,
                      [&](const std::vector<int>& idx, double pw) {
                        const long q = sp.child(j, past, idx);
                        add_x(j, q, w * pu * pw * u);
                        if (j < sp.stages()) {
                          truthful_tail(j + 1, q, true_hist, w * pu * pw);
                        }
                      });
      true_hist.pop_back();
    }
  }
};

/// Predicted LP size (exact for independent processes, an upper bound for
/// correlated ones whose conditionals have pruned supports).
struct SizeEstimate {
  double rows = 0.0, cols = 0.0, nonzeros = 0.0;
};

SizeEstimate estimate_size(const DynamicInstance& inst) {
  const int m = inst.process.stages();
  const double n = inst.buyers;
  std::vector<double> s(m);
  for (int k = 1; k <= m; ++k) {
    s[k - 1] = static_cast<double>(inst.process.stage_support(k).size());
  }
  // tail[j]: matrix entries contributed by a truthful continuation that
  // starts at stage j+1 (0 when j == m).
  std::vector<double> tail(m + 1, 0.0);
  for (int j = m - 1; j >= 1; --j) {
    const double rivals = std::pow(s[j], n - 1);
    tail[j] = s[j] * (1.0 + rivals) + s[j] * rivals * tail[j + 1];
  }

  SizeEstimate e;
  double profiles = 1.0;  // stage-(k-1) profile count
  for (int k = 1; k <= m; ++k) {
    const double sk = s[k - 1];
    const double rivals = std::pow(sk, n - 1);
    const double branch = 1.0 + rivals * (1.0 + tail[k]);
    const double ic_rows = profiles * n * sk * (sk - 1.0);
    const double ir_rows = profiles * n * sk;
    e.rows += ic_rows + ir_rows;
    e.nonzeros += ic_rows * 2.0 * branch;
    e.nonzeros += inst.ir_mode == IrMode::kExAnte
                      ? ir_rows * branch
                      : ir_rows * (1.0 + rivals);
    profiles *= sk * rivals;  // now the stage-k profile count
    e.rows += profiles;       // supply rows
    e.nonzeros += profiles * n;
    e.cols += profiles * n + ir_rows;  // x columns + payment columns
  }
  return e;
}

}  // namespace

DynamicLp build_lp(const DynamicInstance& instance, std::size_t nonzero_cap) {
  if (instance.buyers < 1) throw domain_error("need at least one buyer");
  if (instance.process.stages() < 1) {
    throw domain_error("the value process defines no stages");
  }
  if (instance.stages != instance.process.stages()) {
    throw domain_error("instance stage count disagrees with the value process");
  }

  const SizeEstimate est = estimate_size(instance);
  if (est.nonzeros > static_cast<double>(nonzero_cap)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "dynamic LP too large: ~%.0f rows x %.0f columns with ~%.3g "
                  "matrix entries exceeds the cap of %zu",
                  est.rows, est.cols, est.nonzeros, nonzero_cap);
    throw size_error(msg);
  }

  const int n = instance.buyers;
  const int m = instance.stages;
  DynamicLp out{LpProblem{}, instance, ProfileSpace(instance.process, n), {}, {}};
  const ProfileSpace& sp = out.space;

  LpBuilder builder;
  const double inf = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= m; ++k) {
    out.x_offset.push_back(builder.num_variables());
    for (long q = 0; q < sp.profiles(k); ++q) {
      for (int i = 0; i < n; ++i) builder.add_variable(0.0, 1.0, 0.0);
    }
  }
  for (int k = 1; k <= m; ++k) {
    out.pay_offset.push_back(builder.num_variables());
    const std::vector<double>& support = sp.support(k);
    for (long r = 0; r < sp.profiles(k - 1); ++r) {
      const double pr = sp.probability(k - 1, r);
      for (int i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < support.size(); ++a) {
          double weight = 0.0;
          if (pr > 0.0) {
            weight = pr * sp.process().transition_prob(
                              sp.history(k - 1, r, i), support[a]);
          }
          builder.add_variable(-inf, inf, weight);
        }
      }
    }
  }

  std::vector<std::pair<int, double>> entries;
  BranchWalker walker{
      sp, 0,
      [&](int k, long q, double c) {
        entries.emplace_back(out.x_col(k, q, walker.buyer), c);
      },
      [&](int k, long past, int a, double c) {
        entries.emplace_back(out.pay_col(k, past, walker.buyer, a), c);
      }};

  // Incentive rows: truthful branch minus deviation branch >= 0.
  for (int k = 1; k <= m; ++k) {
    const std::vector<double>& support = sp.support(k);
    const int sk = static_cast<int>(support.size());
    for (long r = 0; r < sp.profiles(k - 1); ++r) {
      for (int i = 0; i < n; ++i) {
        walker.buyer = i;
        for (int a = 0; a < sk; ++a) {
          for (int b = 0; b < sk; ++b) {
            if (a == b) continue;
            entries.clear();
            walker.report_branch(k, r, a, support[a], 1.0, true);
            walker.report_branch(k, r, b, support[a], -1.0, true);
            builder.add_row(RowSense::kGe, 0.0, entries);
            ++out.ic_rows;
          }
        }
      }
    }
  }

  // Participation rows. Ex-post: the current stage's interim utility is
  // non-negative; ex-ante: the truthful continuation utility is.
  const bool ex_ante = instance.ir_mode == IrMode::kExAnte;
  for (int k = 1; k <= m; ++k) {
    const std::vector<double>& support = sp.support(k);
    for (long r = 0; r < sp.profiles(k - 1); ++r) {
      for (int i = 0; i < n; ++i) {
        walker.buyer = i;
        for (int a = 0; a < static_cast<int>(support.size()); ++a) {
          entries.clear();
          walker.report_branch(k, r, a, support[a], 1.0, ex_ante);
          builder.add_row(RowSense::kGe, 0.0, entries);
          ++out.ir_rows;
        }
      }
    }
  }

  // Unit supply per stage and profile.
  for (int k = 1; k <= m; ++k) {
    for (long q = 0; q < sp.profiles(k); ++q) {
      entries.clear();
      for (int i = 0; i < n; ++i) entries.emplace_back(out.x_col(k, q, i), 1.0);
      builder.add_row(RowSense::kLe, 1.0, entries);
      ++out.supply_rows;
    }
  }

  out.lp = builder.build();
  return out;
}

MechanismSolution solve_lp(const DynamicLp& built, double tolerance) {
  SimplexResult res;
  try {
    res = simplex_solve(built.lp, tolerance);
  } catch (const numeric_error& e) {
    // The zero mechanism is always feasible and total welfare bounds the
    // objective, so neither infeasibility nor unboundedness can occur.
    throw numeric_error(std::string("revenue program did not solve (") +
                        e.what() + "); this indicates a construction bug");
  }

  const ProfileSpace& sp = built.space;
  const int n = built.instance.buyers;
  MechanismSolution sol;
  sol.objective = res.objective;
  sol.x.resize(sp.stages());
  sol.p.resize(sp.stages());
  for (int k = 1; k <= sp.stages(); ++k) {
    sol.x[k - 1].assign(sp.profiles(k), std::vector<double>(n, 0.0));
    sol.p[k - 1].assign(sp.profiles(k), std::vector<double>(n, 0.0));
    for (long q = 0; q < sp.profiles(k); ++q) {
      const long past = sp.parent(k, q);
      for (int i = 0; i < n; ++i) {
        sol.x[k - 1][q][i] = res.x[built.x_col(k, q, i)];
        sol.p[k - 1][q][i] =
            res.x[built.pay_col(k, past, i, sp.value_index(k, q, i, k))];
      }
    }
  }
  return sol;
}

namespace {

/// Interim allocation and payment tables: entry (k, past, i, a) is the
/// expectation over the other buyers' stage-k draws when buyer i reports
/// support value a after the joint past profile.
struct InterimTables {
  std::vector<std::vector<double>> xbar, pbar;  // [k-1][(past*n + i)*s + a]

  double& xb(const ProfileSpace& sp, int k, long past, int i, int a) {
    return xbar[k - 1][(past * sp.buyers() + i) * sp.support_size(k) + a];
  }
  double& pb(const ProfileSpace& sp, int k, long past, int i, int a) {
    return pbar[k - 1][(past * sp.buyers() + i) * sp.support_size(k) + a];
  }
};

InterimTables interim_tables(const ProfileSpace& sp,
                             const MechanismSolution& sol) {
  InterimTables t;
  t.xbar.resize(sp.stages());
  t.pbar.resize(sp.stages());
  std::vector<int> stage_idx(sp.buyers(), 0);
  for (int k = 1; k <= sp.stages(); ++k) {
    const long size = sp.profiles(k - 1) * sp.buyers() * sp.support_size(k);
    t.xbar[k - 1].assign(size, 0.0);
    t.pbar[k - 1].assign(size, 0.0);
    for (long past = 0; past < sp.profiles(k - 1); ++past) {
      for (int i = 0; i < sp.buyers(); ++i) {
        for (int a = 0; a < sp.support_size(k); ++a) {
          stage_idx[i] = a;
          double xb = 0.0, pb = 0.0;
          for_rival_draws(sp, k, past, i, stage_idx,
                          [&](const std::vector<int>& idx, double pw) {
                            const long q = sp.child(k, past, idx);
                            xb += pw * sol.x[k - 1][q][i];
                            pb += pw * sol.p[k - 1][q][i];
                          });
          t.xb(sp, k, past, i, a) = xb;
          t.pb(sp, k, past, i, a) = pb;
        }
      }
    }
  }
  return t;
}

/// Expected truthful continuation utility of buyer i from stage j onward,
/// when the joint reports so far are `past` but the buyer's true history is
/// `true_hist` (they differ after an earlier misreport).
double tail_utility(const ProfileSpace& sp, InterimTables& t, int i, int j,
                    long past, std::vector<double>& true_hist) {
  if (j > sp.stages()) return 0.0;
  double total = 0.0;
  std::vector<int> stage_idx(sp.buyers(), 0);
  for (const auto& [a, pu] : stage_draws(sp, j, true_hist)) {
    const double u = sp.support(j)[a];
    double util = u * t.xb(sp, j, past, i, a) - t.pb(sp, j, past, i, a);
    if (j < sp.stages()) {
      stage_idx[i] = a;
      true_hist.push_back(u);
      for_rival_draws(sp, j, past, i, stage_idx,
                      [&](const std::vector<int>& idx, double pw) {
                        const long q = sp.child(j, past, idx);
                        util += pw * tail_utility(sp, t, i, j + 1, q, true_hist);
                      });
      true_hist.pop_back();
    }
    total += pu * util;
  }
  return total;
}

/// Expected utility of buyer i with true stage-k value `true_value` when it
/// reports support index `report` and is truthful afterwards.
double report_utility(const ProfileSpace& sp, InterimTables& t, int i, int k,
                      long past, int report, double true_value,
                      bool with_future) {
  double util = true_value * t.xb(sp, k, past, i, report) -
                t.pb(sp, k, past, i, report);
  if (with_future && k < sp.stages()) {
    std::vector<double> true_hist = sp.history(k - 1, past, i);
    true_hist.push_back(true_value);
    std::vector<int> stage_idx(sp.buyers(), 0);
    stage_idx[i] = report;
    for_rival_draws(sp, k, past, i, stage_idx,
                    [&](const std::vector<int>& idx, double pw) {
                      const long q = sp.child(k, past, idx);
                      util += pw * tail_utility(sp, t, i, k + 1, q, true_hist);
                    });
  }
  return util;
}

}  // namespace

VerificationReport verify_mechanism(const DynamicInstance& instance,
                                    const MechanismSolution& solution) {
  ProfileSpace sp(instance.process, instance.buyers);
  const int n = instance.buyers;
  const int m = sp.stages();
  if (static_cast<int>(solution.x.size()) != m ||
      static_cast<int>(solution.p.size()) != m) {
    throw domain_error("mechanism tables do not match the instance's stages");
  }
  for (int k = 1; k <= m; ++k) {
    if (static_cast<long>(solution.x[k - 1].size()) != sp.profiles(k) ||
        static_cast<long>(solution.p[k - 1].size()) != sp.profiles(k)) {
      throw domain_error("mechanism tables do not match the report profiles");
    }
    for (long q = 0; q < sp.profiles(k); ++q) {
      if (static_cast<int>(solution.x[k - 1][q].size()) != n ||
          static_cast<int>(solution.p[k - 1][q].size()) != n) {
        throw domain_error("mechanism tables do not match the buyer count");
      }
    }
  }

  InterimTables t = interim_tables(sp, solution);
  VerificationReport rep;

  for (int k = 1; k <= m; ++k) {
    const std::vector<double>& support = sp.support(k);
    const int sk = static_cast<int>(support.size());
    for (long r = 0; r < sp.profiles(k - 1); ++r) {
      for (int i = 0; i < n; ++i) {
        for (int a = 0; a < sk; ++a) {
          const double truthful =
              report_utility(sp, t, i, k, r, a, support[a], true);
          for (int b = 0; b < sk; ++b) {
            if (a == b) continue;
            const double deviating =
                report_utility(sp, t, i, k, r, b, support[a], true);
            rep.max_ic = std::max(rep.max_ic, deviating - truthful);
          }
          const double ir = instance.ir_mode == IrMode::kExAnte
                                ? truthful
                                : report_utility(sp, t, i, k, r, a, support[a],
                                                 false);
          rep.max_ir = std::max(rep.max_ir, -ir);
        }
      }
    }
  }

  for (int k = 1; k <= m; ++k) {
    for (long q = 0; q < sp.profiles(k); ++q) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = solution.x[k - 1][q][i];
        total += x;
        rep.max_feasibility = std::max({rep.max_feasibility, -x, x - 1.0});
      }
      rep.max_feasibility = std::max(rep.max_feasibility, total - 1.0);
    }
  }

  rep.max_violation = std::max({rep.max_ic, rep.max_ir, rep.max_feasibility});
  return rep;
}

double welfare_bound(const DynamicInstance& instance) {
  double total = 0.0;
  for (int k = 1; k <= instance.process.stages(); ++k) {
    total += expected_order_stat(instance.process.stage_marginal(k), 1,
                                 instance.buyers);
  }
  return total;
}

}  // namespace dynauct
