#pragma once

// The locality-condition system: Parameter Independence, Outcome
// Independence, Completeness, factorizability of deterministic lambda-models,
// lambda-conditional Parameter Independence, the deterministic-strategy CHSH
// bound, and the propositional audit of the three implication forms.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmlab/eprb.hpp"
#include "qmlab/expansion.hpp"
#include "qmlab/hilbert.hpp"

namespace qmlab {

struct ConditionVerdict {
  std::string condition;
  bool pass = false;
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::vector<std::string> skipped;  // degenerate conditioning cells, reported not failed

  static ConditionVerdict make(std::string name, double violation, double tol,
                               std::vector<std::string> skipped = {}) {
    ConditionVerdict v;
    v.condition = std::move(name);
    v.max_violation = violation;
    v.tolerance = tol;
    v.pass = violation <= tol;
    v.skipped = std::move(skipped);
    return v;
  }
};

inline std::array<JointDistribution, 4> scenario_distributions(const StateVector& psi,
                                                               const Scenario& s,
                                                               Backend backend) {
  const auto pairs = s.setting_pairs();
  std::array<JointDistribution, 4> d{};
  for (std::size_t i = 0; i < 4; ++i)
    d[i] = joint_distribution(psi, pairs[i].first, pairs[i].second, backend, s.n);
  return d;
}

// Marginals invariant under the remote setting. Pair order is
// (a,b), (a,b'), (a',b), (a',b'): Alice compares 0 vs 1 and 2 vs 3, Bob 0 vs 2
// and 1 vs 3.
inline ConditionVerdict check_parameter_independence_dists(
    const std::array<JointDistribution, 4>& d, double tol) {
  double worst = 0.0;
  const auto compare_alice = [&](std::size_t i, std::size_t j) {
    const Marginals mi = marginals(d[i]);
    const Marginals mj = marginals(d[j]);
    for (std::size_t k = 0; k < 2; ++k)
      worst = std::max(worst, std::abs(mi.alice[k] - mj.alice[k]));
  };
  const auto compare_bob = [&](std::size_t i, std::size_t j) {
    const Marginals mi = marginals(d[i]);
    const Marginals mj = marginals(d[j]);
    for (std::size_t k = 0; k < 2; ++k)
      worst = std::max(worst, std::abs(mi.bob[k] - mj.bob[k]));
  };
  compare_alice(0, 1);
  compare_alice(2, 3);
  compare_bob(0, 2);
  compare_bob(1, 3);
  return ConditionVerdict::make("parameter_independence", worst, tol);
}

inline ConditionVerdict check_parameter_independence(const StateVector& psi, const Scenario& s,
                                                     Backend backend, double tol) {
  return check_parameter_independence_dists(scenario_distributions(psi, s, backend), tol);
}

// |p(s) - p(s|t)| maximized over settings, sides, and non-degenerate
// conditioning outcomes.
inline ConditionVerdict check_outcome_independence_dists(const std::array<JointDistribution, 4>& d,
                                                         double tol) {
  double worst = 0.0;
  std::vector<std::string> skipped;
  for (std::size_t i = 0; i < 4; ++i) {
    const Marginals m = marginals(d[i]);
    for (Side side : {Side::Alice, Side::Bob}) {
      for (int given : {+1, -1}) {
        const double pg = (side == Side::Alice) ? m.bob[outcome_index(given)]
                                                : m.alice[outcome_index(given)];
        if (pg <= eps_cond) {
          skipped.push_back(std::string(Scenario::pair_name(i)) +
                            (side == Side::Alice ? " | t=" : " | s=") +
                            (given > 0 ? "+1" : "-1"));
          continue;
        }
        const std::array<double, 2> cond = conditional(d[i], side, given);
        for (int o : {+1, -1}) {
          const double uncond = (side == Side::Alice) ? m.alice[outcome_index(o)]
                                                      : m.bob[outcome_index(o)];
          worst = std::max(worst, std::abs(uncond - cond[outcome_index(o)]));
        }
      }
    }
  }
  return ConditionVerdict::make("outcome_independence", worst, tol, std::move(skipped));
}

inline ConditionVerdict check_outcome_independence(const StateVector& psi, const Scenario& s,
                                                   Backend backend, double tol) {
  return check_outcome_independence_dists(scenario_distributions(psi, s, backend), tol);
}

// |p(s,t) - p(s) p(t)| for one setting pair.
inline ConditionVerdict check_completeness_dist(const JointDistribution& d, double tol) {
  const Marginals m = marginals(d);
  double worst = 0.0;
  for (int s : {+1, -1})
    for (int t : {+1, -1})
      worst = std::max(worst, std::abs(d.p_of(s, t) -
                                       m.alice[outcome_index(s)] * m.bob[outcome_index(t)]));
  return ConditionVerdict::make("completeness", worst, tol);
}

inline ConditionVerdict check_completeness(const StateVector& psi, const Direction& x,
                                           const Direction& y, Backend backend, double tol,
                                           std::size_t n = 0) {
  return check_completeness_dist(joint_distribution(psi, x, y, backend, n), tol);
}

// A local deterministic strategy: outcomes as functions of the local setting
// only. s[0] = s(a), s[1] = s(a'), t[0] = t(b), t[1] = t(b').
struct DeterministicStrategy {
  std::array<int, 2> s{+1, +1};
  std::array<int, 2> t{+1, +1};

  double chsh() const {
    const auto e = [&](std::size_t x, std::size_t y) {
      return static_cast<double>(s[x] * t[y]);
    };
    return e(0, 0) - e(0, 1) + e(1, 0) + e(1, 1);
  }
};

inline std::array<DeterministicStrategy, 16> all_deterministic_strategies() {
  std::array<DeterministicStrategy, 16> out{};
  std::size_t k = 0;
  for (int sa : {+1, -1})
    for (int sap : {+1, -1})
      for (int tb : {+1, -1})
        for (int tbp : {+1, -1}) out[k++] = DeterministicStrategy{{sa, sap}, {tb, tbp}};
  return out;
}

// Exhaustive enumeration over the 16 local deterministic strategies.
inline double deterministic_strategy_max_chsh() {
  double best = 0.0;
  for (const DeterministicStrategy& st : all_deterministic_strategies())
    best = std::max(best, std::abs(st.chsh()));
  return best;
}

// Per-lambda outcome tables of a deterministic hidden-variable model.
// pair order (a,b), (a,b'), (a',b), (a',b'); pair i has Alice setting i/2 and
// Bob setting i%2. Single-pair models (one vector entry) are allowed: that is
// the lambda-ONE situation, where each lambda belongs to one setting pair.
struct LambdaTables {
  std::vector<std::array<double, 4>> joint;  // per pair, cell order as cell_index
  std::vector<std::array<double, 2>> alice;  // per pair
  std::vector<std::array<double, 2>> bob;    // per pair
};

inline LambdaTables strategy_tables(const DeterministicStrategy& st) {
  LambdaTables t;
  for (std::size_t pair = 0; pair < 4; ++pair) {
    const std::size_t x = pair / 2;
    const std::size_t y = pair % 2;
    std::array<double, 4> joint{};
    joint[cell_index(st.s[x], st.t[y])] = 1.0;
    std::array<double, 2> a{};
    a[outcome_index(st.s[x])] = 1.0;
    std::array<double, 2> b{};
    b[outcome_index(st.t[y])] = 1.0;
    t.joint.push_back(joint);
    t.alice.push_back(a);
    t.bob.push_back(b);
  }
  return t;
}

// Factorizability of a deterministic lambda-model: per lambda, per pair, the
// joint table equals the product of the side tables, and the side tables
// depend only on the local setting. All entries must be 0/1.
inline ConditionVerdict check_factorizability(const std::vector<LambdaTables>& lambdas,
                                              double tol = 1e-9) {
  constexpr double det_tol = 1e-9;
  double worst = 0.0;
  for (const LambdaTables& lt : lambdas) {
    const std::size_t pairs = lt.joint.size();
    if (lt.alice.size() != pairs || lt.bob.size() != pairs)
      throw std::invalid_argument("check_factorizability: ragged tables");
    for (std::size_t pair = 0; pair < pairs; ++pair) {
      for (double v : lt.joint[pair])
        if (std::min(std::abs(v), std::abs(v - 1.0)) > det_tol)
          throw std::invalid_argument("not deterministic");
      for (double v : lt.alice[pair])
        if (std::min(std::abs(v), std::abs(v - 1.0)) > det_tol)
          throw std::invalid_argument("not deterministic");
      for (double v : lt.bob[pair])
        if (std::min(std::abs(v), std::abs(v - 1.0)) > det_tol)
          throw std::invalid_argument("not deterministic");
      for (int s : {+1, -1})
        for (int t : {+1, -1})
          worst = std::max(worst, std::abs(lt.joint[pair][cell_index(s, t)] -
                                           lt.alice[pair][outcome_index(s)] *
                                               lt.bob[pair][outcome_index(t)]));
    }
    if (pairs == 4) {
      // Side tables must be functions of the local setting alone.
      for (std::size_t k = 0; k < 2; ++k) {
        worst = std::max(worst, std::abs(lt.alice[0][k] - lt.alice[1][k]));  // x = a
        worst = std::max(worst, std::abs(lt.alice[2][k] - lt.alice[3][k]));  // x = a'
        worst = std::max(worst, std::abs(lt.bob[0][k] - lt.bob[2][k]));      // y = b
        worst = std::max(worst, std::abs(lt.bob[1][k] - lt.bob[3][k]));      // y = b'
      }
    }
  }
  return ConditionVerdict::make("factorizability", worst, tol);
}

struct LambdaPIReport {
  bool applicable = false;
  ConditionVerdict verdict;       // meaningful when applicable
  double max_cross_overlap = 0.0; // disjointness witness when not applicable
  std::string note;
};

// Lambda-conditional Parameter Independence for models whose lambda space
// does not depend on the settings:
// Alice's per-lambda marginal must not depend on Bob's setting, and mirrored.
inline LambdaPIReport check_lambda_parameter_independence_strategies(
    const std::vector<LambdaTables>& lambdas, double tol = 1e-9) {
  double worst = 0.0;
  for (const LambdaTables& lt : lambdas) {
    if (lt.joint.size() != 4)
      throw std::invalid_argument("lambda PI over strategies needs all four pairs");
    for (std::size_t k = 0; k < 2; ++k) {
      worst = std::max(worst, std::abs(lt.alice[0][k] - lt.alice[1][k]));
      worst = std::max(worst, std::abs(lt.alice[2][k] - lt.alice[3][k]));
      worst = std::max(worst, std::abs(lt.bob[0][k] - lt.bob[2][k]));
      worst = std::max(worst, std::abs(lt.bob[1][k] - lt.bob[3][k]));
    }
  }
  LambdaPIReport r;
  r.applicable = true;
  r.verdict = ConditionVerdict::make("lambda_parameter_independence", worst, tol);
  r.note = "setting-independent lambda space; per-lambda identity evaluated directly";
  return r;
}

// max_{i,j} |<xi_i, eta_j>| / (||xi_i|| ||eta_j||) across two ensembles.
inline double max_cross_overlap(const EquiampExpansion& e1, const EquiampExpansion& e2) {
  double worst = 0.0;
  for (const StateVector& x : e1.microstates()) {
    const double nx = x.norm();
    for (const StateVector& y : e2.microstates())
      worst = std::max(worst, std::abs(inner(x, y)) / (nx * y.norm()));
  }
  return worst;
}

// Lambda-conditional Parameter Independence for ensembles adapted to two
// different remote settings. When the settings differ, the two lambda spaces
// share no rays and the identity has no common lambda to range over: the
// report is NOT-APPLICABLE with the disjointness witness. When the settings
// coincide the ensembles are identical and the identity holds trivially.
inline LambdaPIReport check_lambda_parameter_independence_ensembles(
    const EquiampExpansion& e1, const EquiampExpansion& e2, bool same_remote_setting,
    double ray_eps = 1e-6) {
  LambdaPIReport r;
  if (same_remote_setting) {
    r.applicable = true;
    r.verdict = ConditionVerdict::make("lambda_parameter_independence", 0.0, ray_eps);
    r.note = "identical ensembles; identity holds trivially";
    return r;
  }
  r.applicable = false;
  r.max_cross_overlap = max_cross_overlap(e1, e2);
  r.note = r.max_cross_overlap < 1.0 - ray_eps
               ? "ensembles share no rays; the per-lambda identity has nothing to range over"
               : "ensembles share rays despite distinct settings";
  return r;
}

struct ModelFlags {
  bool loc = false;
  bool ind = false;
  bool unique = false;
  bool bell = false;
};

// The three logically equivalent readings of the same implication chain,
// each evaluated as a material conditional on the model's flags.
struct AuditResult {
  bool implies_bell = false;        // (LOC & IND & UNIQUE) -> BELL
  bool implies_not_unique = false;  // (LOC & IND & !BELL) -> !UNIQUE
  bool implies_not_ind = false;     // (LOC & UNIQUE & !BELL) -> !IND
  bool consistent() const { return implies_bell && implies_not_unique && implies_not_ind; }
};

inline AuditResult implication_audit(const ModelFlags& f) {
  const auto implies = [](bool a, bool b) { return !a || b; };
  AuditResult r;
  r.implies_bell = implies(f.loc && f.ind && f.unique, f.bell);
  r.implies_not_unique = implies(f.loc && f.ind && !f.bell, !f.unique);
  r.implies_not_ind = implies(f.loc && f.unique && !f.bell, !f.ind);
  return r;
}

}  // namespace qmlab
