#pragma once

// The acceptance suite: each criterion is a self-contained check with pinned
// tolerances, runnable from the test binary and from `qmlab verify`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qmlab/conditions.hpp"
#include "qmlab/eprb.hpp"
#include "qmlab/expansion.hpp"
#include "qmlab/invariance.hpp"
#include "qmlab/lambda_one.hpp"
#include "qmlab/random_states.hpp"
#include "qmlab/report.hpp"

namespace qmlab::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Random 4-part rank profile summing to dim, each part at least min_rank.
inline std::vector<std::size_t> random_ranks(std::size_t dim, std::size_t parts,
                                             std::size_t min_rank, rng::Stream& st) {
  std::vector<std::size_t> ranks(parts, min_rank);
  std::size_t rest = dim - parts * min_rank;
  for (std::size_t i = 0; i + 1 < parts; ++i) {
    const std::size_t take = st.next_index(rest + 1);
    ranks[i] += take;
    rest -= take;
  }
  ranks[parts - 1] += rest;
  return ranks;
}

template <typename F>
CriterionResult timed(int id, std::string name, F&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

// 1. Adapted counting vs Born at ambient dim 64, n in {10, 100, 1000}:
//    |m_i/n - Born_i| <= 3/n per cell. The allocation is checked for every n;
//    the full microstate construction is cross-checked whenever the rank
//    preconditions admit it (n = 10 at this dimension; orthogonality caps a
//    constructed expansion at n <= 64).
inline CriterionResult criterion_1() {
  return detail::timed(1, "adapted counting vs Born (dim 64, n in {10,100,1000})",
                       [](CriterionResult& r) {
    rng::Stream st(0xc1);
    const std::size_t dim = 64;
    double worst_ratio = 0.0;  // |m/n - born| * n / 3
    std::size_t constructed = 0, construction_mismatches = 0;
    for (int inst = 0; inst < 100; ++inst) {
      const Resolution res =
          random_resolution({dim}, detail::random_ranks(dim, 4, 8, st), st);
      const StateVector psi = random_state({dim}, st);
      double borns[4];
      for (std::size_t i = 0; i < 4; ++i) borns[i] = born(psi, res[i]);
      for (std::size_t n : {10u, 100u, 1000u}) {
        const CountingAllocation a = counting_allocation(psi, res, n);
        for (std::size_t i = 0; i < 4; ++i) {
          const double err = std::abs(a.probability(i) - borns[i]);
          worst_ratio = std::max(worst_ratio, err * static_cast<double>(n) / 3.0);
        }
        bool feasible = n <= dim;
        for (std::size_t i = 0; feasible && i < 4; ++i) {
          const CellAllocation& c = a.cells[i];
          if (c.occupied && res[i].rank() < c.m + (c.remainder2 > 0.0 ? 1 : 0))
            feasible = false;
        }
        if (feasible) {
          const EquiampExpansion e = expand_adapted(psi, res, n);
          const CountingDistribution d = counting_distribution(e, res);
          ++constructed;
          for (std::size_t i = 0; i < 4; ++i)
            if (d.m[i] != a.cells[i].m) ++construction_mismatches;
          if (d.cats != a.cats) ++construction_mismatches;
        }
      }
    }
    r.pass = worst_ratio <= 1.0 && constructed >= 100 && construction_mismatches == 0;
    r.detail = "max |m/n - Born| / (3/n) = " + detail::num(worst_ratio) + ", " +
               std::to_string(constructed) + " full constructions cross-checked, " +
               std::to_string(construction_mismatches) + " mismatches";
  });
}

// 2. Imprecise containment over 1000 random (psi, P, generic expansion).
inline CriterionResult criterion_2() {
  return detail::timed(2, "imprecise bounds contain the Born value (1000 triples)",
                       [](CriterionResult& r) {
    rng::Stream st(0xc2);
    std::size_t failures = 0;
    double worst_slack = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
      const std::size_t dim = 3 + st.next_index(30);
      const StateVector psi = random_state({dim}, st);
      const Projector p = random_projector({dim}, 1 + st.next_index(dim - 1), st);
      const std::size_t n = 1 + st.next_index(dim);
      const EquiampExpansion e = expand_generic(psi, n, st.next_u64());
      const ImpreciseProbability ip = imprecise_probability(e, p);
      const double b = born(psi, p);
      const double slack = std::max(ip.lower - b, b - ip.upper);
      worst_slack = std::max(worst_slack, slack);
      if (!ip.contains(b, 1e-9)) ++failures;
    }
    r.pass = failures == 0;
    r.detail = std::to_string(failures) + " containment failures, worst slack " +
               detail::num(worst_slack);
  });
}

// 3. Tsirelson: Born |S| within 1e-9 of 2 sqrt(2); counting within 0.05 at
//    n = 1000 on the default EPRB factors.
inline CriterionResult criterion_3() {
  return detail::timed(3, "Tsirelson reproduction at the canonical angles",
                       [](CriterionResult& r) {
    Scenario born_s = Scenario::tsirelson();
    born_s.d_a = born_s.d_b = 2;
    const double sb = std::abs(chsh(singlet_state(2, 2), born_s, Backend::Born));
    Scenario count_s = Scenario::tsirelson();  // d_a = d_b = 32, n = 1000
    const double sc =
        std::abs(chsh(singlet_state(count_s.d_a, count_s.d_b), count_s, Backend::Counting));
    const double target = 2.0 * M_SQRT2;
    r.pass = std::abs(sb - target) <= 1e-9 && std::abs(sc - target) <= 0.05;
    r.detail = "born |S| = " + detail::num(sb) + ", counting |S| = " + detail::num(sc);
  });
}

// 4. Classical bound: strategy enumeration hits exactly 2; 10^4 random
//    product states stay below 2 + 1e-9 under the Born backend.
inline CriterionResult criterion_4() {
  return detail::timed(4, "classical bound (16 strategies exact, 10^4 product states)",
                       [](CriterionResult& r) {
    const double strategy_max = deterministic_strategy_max_chsh();
    rng::Stream st(0xc4);
    double worst = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
      Scenario s;
      s.a = random_direction(st);
      s.a_prime = random_direction(st);
      s.b = random_direction(st);
      s.b_prime = random_direction(st);
      s.d_a = s.d_b = 1;
      const StateVector psi =
          product_state({st.next_complex_gaussian(), st.next_complex_gaussian()},
                        {st.next_complex_gaussian(), st.next_complex_gaussian()}, 1, 1);
      worst = std::max(worst, std::abs(chsh(psi, s, Backend::Born)));
    }
    r.pass = strategy_max == 2.0 && worst <= 2.0 + 1e-9;
    r.detail = "strategy max = " + detail::num(strategy_max) +
               ", product-state max |S| = " + detail::num(worst);
  });
}

// 5. Completeness for product states: the tensor-of-expansions counting is
//    the integer identity m_a m_b / (n_a n_b); Born joints factorize to 1e-12.
inline CriterionResult criterion_5() {
  return detail::timed(5, "product-state completeness (integer identity + Born factorization)",
                       [](CriterionResult& r) {
    rng::Stream st(0xc5);
    const Direction z(0, 0, 1);
    std::size_t integer_mismatches = 0;
    double worst_born = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
      const std::array<cdouble, 2> ca{st.next_complex_gaussian(), st.next_complex_gaussian()};
      const std::array<cdouble, 2> cb{st.next_complex_gaussian(), st.next_complex_gaussian()};
      const Direction x = random_direction(st);
      const Direction y = random_direction(st);
      const StateVector phi = side_state(ca, 10, true);
      const StateVector chi = side_state(cb, 10, false);
      const EquiampExpansion ea = expand_adapted(phi, marginal_resolution(x, 0, phi.dims()), 8);
      const EquiampExpansion eb = expand_adapted(chi, marginal_resolution(y, 0, chi.dims()), 8);
      const EquiampExpansion joint = tensor_product_expansion(ea, eb);
      const AdaptedInfo& ia = *ea.adapted_info();
      const AdaptedInfo& ib = *eb.adapted_info();
      const AdaptedInfo& ij = *joint.adapted_info();
      for (std::size_t cA = 0; cA < 2; ++cA)
        for (std::size_t cB = 0; cB < 2; ++cB)
          if (ij.m[cA * 2 + cB] != ia.m[cA] * ib.m[cB]) ++integer_mismatches;

      const StateVector psi = tensor(phi, chi);
      const JointDistribution d = joint_distribution(psi, x, y, Backend::Born);
      const Marginals m = marginals(d);
      for (int s : {+1, -1})
        for (int t : {+1, -1})
          worst_born = std::max(worst_born,
                                std::abs(d.p_of(s, t) - m.alice[outcome_index(s)] *
                                                            m.bob[outcome_index(t)]));
    }
    r.pass = integer_mismatches == 0 && worst_born <= 1e-12;
    r.detail = std::to_string(integer_mismatches) + " integer mismatches, worst Born deviation " +
               detail::num(worst_born);
  });
}

// 6. Outcome-Independence violation for the singlet at equal settings:
//    |p(+1) - p(+1 | t=+1)| = 1/2.
inline CriterionResult criterion_6() {
  return detail::timed(6, "singlet OI violation of exactly 1/2 at equal settings",
                       [](CriterionResult& r) {
    const StateVector psi = singlet_state(2, 2);
    const Direction z(0, 0, 1);
    const JointDistribution d = joint_distribution(psi, z, z, Backend::Born);
    const double uncond = marginals(d).alice[0];
    const double cond = conditional(d, Side::Alice, +1)[0];
    const double violation = std::abs(uncond - cond);
    r.pass = std::abs(violation - 0.5) <= 1e-9;
    r.detail = "|p(+1) - p(+1|t=+1)| = " + detail::num(violation);
  });
}

// 7. Parameter Independence: Born marginal shifts <= 1e-12 over 100 random
//    scenarios; counting shifts <= 6/n.
inline CriterionResult criterion_7() {
  return detail::timed(7, "parameter independence (100 random scenarios, both backends)",
                       [](CriterionResult& r) {
    rng::Stream st(0xc7);
    const std::size_t n = 64;
    double worst_born = 0.0, worst_count = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      Scenario s;
      s.a = random_direction(st);
      s.a_prime = random_direction(st);
      s.b = random_direction(st);
      s.b_prime = random_direction(st);
      s.d_a = s.d_b = 12;
      s.n = n;
      if (st.next_double() < 0.5) {
        s.kind = StateKind::Singlet;
      } else {
        s.kind = StateKind::Product;
        s.chi_a = {st.next_complex_gaussian(), st.next_complex_gaussian()};
        s.chi_b = {st.next_complex_gaussian(), st.next_complex_gaussian()};
      }
      const StateVector psi = scenario_state(s);
      worst_born = std::max(
          worst_born, check_parameter_independence(psi, s, Backend::Born, 1e-12).max_violation);
      worst_count = std::max(
          worst_count,
          check_parameter_independence(psi, s, Backend::Counting, 6.0 / n).max_violation);
    }
    r.pass = worst_born <= 1e-12 && worst_count <= 6.0 / n;
    r.detail = "born max shift " + detail::num(worst_born) + ", counting max shift " +
               detail::num(worst_count) + " (bound " + detail::num(6.0 / n) + ")";
  });
}

// 8. Lambda-ONE Monte Carlo at the default factors: 10^5 trials per pair at
//    n = 1000, fixed seed; cells within 4 sigma + 3/n of the counting values;
//    |S_hat| > 2.5; cat fraction <= 3/n.
inline CriterionResult criterion_8() {
  return detail::timed(8, "lambda-ONE Monte Carlo (10^5 trials/pair, n = 1000)",
                       [](CriterionResult& r) {
    Scenario s = Scenario::tsirelson();  // d_a = d_b = 32
    s.n = 1000;
    const StateVector psi = singlet_state(s.d_a, s.d_b);
    const lambda_one::RunResult run =
        lambda_one::run_experiment(psi, s, 1000, 100000, 20260808);
    double worst_sigma_excess = 0.0;
    double cat_frac = 0.0;
    for (std::size_t pair = 0; pair < 4; ++pair) {
      const lambda_one::PairStats& ps = run.pairs[pair];
      cat_frac = std::max(cat_frac, ps.cat_fraction);
      for (std::size_t c = 0; c < 4; ++c) {
        const double want = static_cast<double>(run.counting_m[pair][c]) / 1000.0;
        const double sigma = std::sqrt(std::max(want * (1.0 - want), 1e-9) / 1e5);
        const double allowed = 4.0 * sigma + 3.0 / 1000.0;
        worst_sigma_excess = std::max(worst_sigma_excess, std::abs(ps.freq[c] - want) - allowed);
      }
    }
    r.pass = worst_sigma_excess <= 0.0 && std::abs(run.s_hat) > 2.5 &&
             cat_frac <= 3.0 / 1000.0;
    r.detail = "|S_hat| = " + detail::num(std::abs(run.s_hat)) + ", worst cell excess " +
               detail::num(worst_sigma_excess) + ", cat fraction " + detail::num(cat_frac);
  });
}

// 9. Swap witnesses over 100 random equal-norm pairs: unitarity residual
//    <= 1e-12, parent fixed to 1e-10, permuted families revalidate.
inline CriterionResult criterion_9() {
  return detail::timed(9, "swap/invariance witnesses (100 random pairs)",
                       [](CriterionResult& r) {
    rng::Stream st(0xc9);
    double worst_unitarity = 0.0, worst_parent = 0.0;
    std::size_t revalidation_failures = 0;
    for (int rep = 0; rep < 100; ++rep) {
      const std::size_t dim = 8 + st.next_index(17);
      const StateVector psi = random_state({dim}, st);
      const std::size_t n = 2 + st.next_index(6);
      const EquiampExpansion e = expand_generic(psi, n, st.next_u64());
      const std::size_t i = st.next_index(n);
      std::size_t j = st.next_index(n - 1);
      if (j >= i) ++j;
      const Unitary u = swap_unitary(e.microstate(i), e.microstate(j));
      worst_unitarity = std::max(worst_unitarity, u.unitarity_residual());
      StateVector moved = apply_unitary(u, psi);
      moved -= psi;
      worst_parent = std::max(worst_parent, moved.norm() / psi.norm());
      std::vector<StateVector> mapped;
      for (const StateVector& m : e.microstates()) mapped.push_back(apply_unitary(u, m));
      const EquiampExpansion permuted(psi, std::move(mapped));
      if (!permuted.validate().pass()) ++revalidation_failures;
    }
    r.pass = worst_unitarity <= 1e-12 && worst_parent <= 1e-10 && revalidation_failures == 0;
    r.detail = "worst unitarity " + detail::num(worst_unitarity) + ", worst parent residual " +
               detail::num(worst_parent) + ", " + std::to_string(revalidation_failures) +
               " revalidation failures";
  });
}

// 10. Quadratic small-angle behavior: (1 - cos theta)/theta^2 in
//     [0.4995, 0.5] for theta in {0.1, 0.05, 0.025}, with cos theta read off
//     the computed correlation.
inline CriterionResult criterion_10() {
  return detail::timed(10, "quadratic small-angle correlation ratio", [](CriterionResult& r) {
    const StateVector psi = singlet_state(2, 2);
    r.pass = true;
    for (double theta : {0.1, 0.05, 0.025}) {
      const JointDistribution d = joint_distribution(psi, Direction(0, 0, 1),
                                                     Direction::polar_xz(theta), Backend::Born);
      const double ratio = (1.0 + correlation(d)) / (theta * theta);
      if (!(ratio >= 0.4995 && ratio <= 0.5)) r.pass = false;
      r.detail += (r.detail.empty() ? "" : ", ") + detail::num(ratio);
    }
    r.detail = "ratios " + r.detail;
  });
}

// 11. The four built-in models show the expected flag pattern and the
//     implication audit reports no inconsistencies.
inline CriterionResult criterion_11() {
  return detail::timed(11, "condition report flag pattern across the four models",
                       [](CriterionResult& r) {
    Scenario s = Scenario::tsirelson();
    s.d_a = s.d_b = 16;
    s.n = 400;
    const ConditionReport born = condition_report(Model::BornQM, s);
    const ConditionReport many = condition_report(Model::LambdaManyCounting, s);
    const ConditionReport one = condition_report(Model::LambdaOne, s);
    const ConditionReport det = condition_report(Model::DeterministicLocal, s);
    const bool born_ok = born.pi->pass && !born.oi->pass && !born.completeness->pass &&
                         !born.flags.bell && born.audit.consistent();
    const bool many_ok = many.pi->pass && !many.oi->pass && !many.completeness->pass &&
                         !many.flags.unique && !many.flags.bell && many.audit.consistent();
    const bool one_ok = one.factorizability->pass && !one.flags.ind && !one.flags.bell &&
                        one.audit.consistent();
    const bool det_ok = det.pi->pass && det.oi->pass && det.completeness->pass &&
                        det.factorizability->pass && det.flags.bell && det.audit.consistent();
    r.pass = born_ok && many_ok && one_ok && det_ok;
    r.detail = std::string("born-qm ") + (born_ok ? "ok" : "BAD") + ", lambda-many " +
               (many_ok ? "ok" : "BAD") + ", lambda-one " + (one_ok ? "ok" : "BAD") +
               ", deterministic-local " + (det_ok ? "ok" : "BAD");
  });
}

inline CriterionResult run_criterion(int id) {
  switch (id) {
    case 1: return criterion_1();
    case 2: return criterion_2();
    case 3: return criterion_3();
    case 4: return criterion_4();
    case 5: return criterion_5();
    case 6: return criterion_6();
    case 7: return criterion_7();
    case 8: return criterion_8();
    case 9: return criterion_9();
    case 10: return criterion_10();
    case 11: return criterion_11();
    default: throw std::invalid_argument("no such criterion");
  }
}

// Runtime budgets are part of criteria 1 and 8.
inline bool within_budget(const CriterionResult& r) {
  if (r.id == 1) return r.seconds < 30.0;
  if (r.id == 8) return r.seconds < 60.0;
  return true;
}

inline std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 11; ++id) {
    CriterionResult r = run_criterion(id);
    if (!within_budget(r)) {
      r.pass = false;
      r.detail += " [over runtime budget]";
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qmlab::verify
