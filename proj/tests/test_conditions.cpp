#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qmlab/conditions.hpp"
#include "qmlab/eprb.hpp"
#include "qmlab/random_states.hpp"
#include "qmlab/report.hpp"

using namespace qmlab;

namespace {

Scenario small_scenario(StateKind kind, Backend backend, std::size_t n = 64) {
  Scenario s = Scenario::tsirelson();
  s.d_a = s.d_b = 12;
  s.kind = kind;
  s.backend = backend;
  s.n = n;
  return s;
}

}  // namespace

TEST_CASE("parameter independence holds for the singlet under both backends") {
  const Scenario s = small_scenario(StateKind::Singlet, Backend::Born);
  const StateVector psi = scenario_state(s);
  const ConditionVerdict born_v = check_parameter_independence(psi, s, Backend::Born, 1e-12);
  CHECK(born_v.pass);
  CHECK(born_v.max_violation <= 1e-12);
  const ConditionVerdict count_v =
      check_parameter_independence(psi, s, Backend::Counting, 6.0 / 64.0);
  CHECK(count_v.pass);
}

TEST_CASE("parameter independence holds for random product states") {
  rng::Stream st(71);
  for (int rep = 0; rep < 10; ++rep) {
    Scenario s = small_scenario(StateKind::Product, Backend::Born);
    s.a = random_direction(st);
    s.a_prime = random_direction(st);
    s.b = random_direction(st);
    s.b_prime = random_direction(st);
    s.chi_a = {st.next_complex_gaussian(), st.next_complex_gaussian()};
    s.chi_b = {st.next_complex_gaussian(), st.next_complex_gaussian()};
    const StateVector psi = scenario_state(s);
    CHECK(check_parameter_independence(psi, s, Backend::Born, 1e-12).pass);
  }
}

TEST_CASE("outcome independence fails maximally for the singlet at equal settings") {
  Scenario s = small_scenario(StateKind::Singlet, Backend::Born);
  s.b = s.a;  // equal settings in the first pair
  const StateVector psi = scenario_state(s);
  const ConditionVerdict v = check_outcome_independence(psi, s, Backend::Born, 1e-10);
  CHECK_FALSE(v.pass);
  CHECK(v.max_violation == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("outcome independence holds for product states and at orthogonal settings") {
  const Scenario sp = small_scenario(StateKind::Product, Backend::Born);
  const StateVector prod = scenario_state(sp);
  CHECK(check_outcome_independence(prod, sp, Backend::Born, 1e-12).pass);

  // a = z, a' = x, b = b' = y: all four setting pairs are orthogonal, so the
  // singlet cells are uncorrelated quarters and conditionals equal marginals.
  Scenario so = small_scenario(StateKind::Singlet, Backend::Born);
  so.a = Direction(0, 0, 1);
  so.a_prime = Direction(1, 0, 0);
  so.b = Direction(0, 1, 0);
  so.b_prime = Direction(0, 1, 0);
  const StateVector singlet = scenario_state(so);
  const ConditionVerdict v = check_outcome_independence(singlet, so, Backend::Born, 1e-10);
  CHECK(v.pass);
}

TEST_CASE("completeness: product states pass at 1e-12, singlet fails by 1/4 at equal settings") {
  rng::Stream st(72);
  const StateVector prod =
      product_state({st.next_complex_gaussian(), st.next_complex_gaussian()},
                    {st.next_complex_gaussian(), st.next_complex_gaussian()}, 8, 8);
  const Direction x = random_direction(st);
  const Direction y = random_direction(st);
  CHECK(check_completeness(prod, x, y, Backend::Born, 1e-12).pass);

  const StateVector singlet = singlet_state(2, 2);
  const Direction z(0, 0, 1);
  const ConditionVerdict v = check_completeness(singlet, z, z, Backend::Born, 1e-10);
  CHECK_FALSE(v.pass);
  CHECK(v.max_violation == doctest::Approx(0.25).epsilon(1e-9));

  // Orthogonal settings: cos(theta) = 0, cells are uncorrelated quarters.
  CHECK(check_completeness(singlet, z, Direction(1, 0, 0), Backend::Born, 1e-10).pass);
}

TEST_CASE("OI and completeness verdicts agree when every cell is non-degenerate") {
  rng::Stream st(73);
  for (int rep = 0; rep < 20; ++rep) {
    Scenario s = small_scenario(st.next_double() < 0.5 ? StateKind::Singlet : StateKind::Product,
                                Backend::Born);
    s.a = random_direction(st);
    s.a_prime = random_direction(st);
    s.b = random_direction(st);
    s.b_prime = random_direction(st);
    s.chi_a = {st.next_complex_gaussian(), st.next_complex_gaussian()};
    s.chi_b = {st.next_complex_gaussian(), st.next_complex_gaussian()};
    const StateVector psi = scenario_state(s);
    const auto dists = scenario_distributions(psi, s, Backend::Born);
    bool degenerate = false;
    for (const auto& d : dists)
      for (int a : {+1, -1})
        for (int b : {+1, -1})
          if (d.p_of(a, b) <= eps_cond) degenerate = true;
    if (degenerate) continue;
    const bool oi = check_outcome_independence_dists(dists, 1e-9).pass;
    double worst_comp = 0.0;
    for (const auto& d : dists)
      worst_comp = std::max(worst_comp, check_completeness_dist(d, 1e-9).max_violation);
    const bool comp = worst_comp <= 1e-9;
    CHECK(oi == comp);
  }
}

TEST_CASE("completeness bounds the correlation against the marginal product") {
  rng::Stream st(74);
  for (int rep = 0; rep < 20; ++rep) {
    const StateVector psi =
        product_state({st.next_complex_gaussian(), st.next_complex_gaussian()},
                      {st.next_complex_gaussian(), st.next_complex_gaussian()}, 4, 4);
    const JointDistribution d =
        joint_distribution(psi, random_direction(st), random_direction(st), Backend::Born);
    const double tol = 1e-11;
    REQUIRE(check_completeness_dist(d, tol).pass);
    const Marginals m = marginals(d);
    const double ea = m.alice[0] - m.alice[1];
    const double eb = m.bob[0] - m.bob[1];
    CHECK(std::abs(correlation(d) - ea * eb) <= 4.0 * tol);
  }
}

TEST_CASE("deterministic strategies: exhaustive maximum is exactly 2") {
  CHECK(deterministic_strategy_max_chsh() == 2.0);
  // Independent hand enumeration.
  double best = 0.0;
  for (int sa : {+1, -1})
    for (int sap : {+1, -1})
      for (int tb : {+1, -1})
        for (int tbp : {+1, -1}) {
          const double s = sa * tb - sa * tbp + sap * tb + sap * tbp;
          best = std::max(best, std::abs(s));
        }
  CHECK(best == 2.0);
  // The all-up strategy gives exactly 2; mixing Bob's outcomes still gives 2.
  CHECK(DeterministicStrategy{{+1, +1}, {+1, +1}}.chsh() == 2.0);
  CHECK(DeterministicStrategy{{+1, +1}, {+1, -1}}.chsh() == 2.0);
}

TEST_CASE("factorizability: strategies pass, point masses pass") {
  std::vector<LambdaTables> tables;
  for (const DeterministicStrategy& st : all_deterministic_strategies())
    tables.push_back(strategy_tables(st));
  CHECK(check_factorizability(tables).pass);
}

TEST_CASE("factorizability: remote-setting-dependent outcomes fail") {
  // lambda flips Alice's outcome with Bob's setting; averaged marginals stay
  // uniform, but no per-lambda factorization exists.
  std::vector<LambdaTables> tables;
  for (int flip : {+1, -1}) {
    LambdaTables lt;
    for (std::size_t pair = 0; pair < 4; ++pair) {
      const std::size_t y = pair % 2;
      const int s = (y == 0 ? flip : -flip);
      const int t = flip;
      std::array<double, 4> joint{};
      joint[cell_index(s, t)] = 1.0;
      std::array<double, 2> a{};
      a[outcome_index(s)] = 1.0;
      std::array<double, 2> b{};
      b[outcome_index(t)] = 1.0;
      lt.joint.push_back(joint);
      lt.alice.push_back(a);
      lt.bob.push_back(b);
    }
    tables.push_back(std::move(lt));
  }
  const ConditionVerdict v = check_factorizability(tables);
  CHECK_FALSE(v.pass);
  CHECK(v.max_violation == doctest::Approx(1.0));
}

TEST_CASE("factorizability rejects non-deterministic tables") {
  LambdaTables lt;
  lt.joint.push_back({0.5, 0.0, 0.0, 0.5});
  lt.alice.push_back({0.5, 0.5});
  lt.bob.push_back({0.5, 0.5});
  CHECK_THROWS_WITH_AS(check_factorizability({lt}), "not deterministic", std::invalid_argument);
}

TEST_CASE("lambda parameter independence: strategies satisfy the per-lambda identity exactly") {
  std::vector<LambdaTables> tables;
  for (const DeterministicStrategy& st : all_deterministic_strategies())
    tables.push_back(strategy_tables(st));
  const LambdaPIReport r = check_lambda_parameter_independence_strategies(tables);
  CHECK(r.applicable);
  CHECK(r.verdict.pass);
  CHECK(r.verdict.max_violation == 0.0);
}

TEST_CASE("lambda parameter independence: setting-adapted ensembles are disjoint") {
  const StateVector psi = singlet_state(4, 4);
  const Direction z(0, 0, 1);
  const Direction x(1, 0, 0);
  const std::size_t n = 16;
  const EquiampExpansion e1 = expand_adapted(psi, joint_resolution(z, z, 4, 4), n);
  const EquiampExpansion e2 = expand_adapted(psi, joint_resolution(z, x, 4, 4), n);
  const LambdaPIReport r = check_lambda_parameter_independence_ensembles(e1, e2, false);
  CHECK_FALSE(r.applicable);
  CHECK(r.max_cross_overlap < 1.0 - 1e-6);

  const LambdaPIReport same = check_lambda_parameter_independence_ensembles(e1, e1, true);
  CHECK(same.applicable);
  CHECK(same.verdict.pass);
}

TEST_CASE("implication audit over the model flag combinations") {
  // lambda-many: LOC, IND, not UNIQUE, not BELL -> consistent (vacuous 12).
  CHECK(implication_audit({true, true, false, false}).consistent());
  // lambda-one: LOC, not IND, UNIQUE, not BELL -> consistent via 14.
  CHECK(implication_audit({true, false, true, false}).consistent());
  // LOC, IND, UNIQUE, not BELL contradicts the first implication.
  const AuditResult bad = implication_audit({true, true, true, false});
  CHECK_FALSE(bad.implies_bell);
  CHECK_FALSE(bad.consistent());
  // Deterministic local: everything true.
  CHECK(implication_audit({true, true, true, true}).consistent());
}

TEST_CASE("condition report: product scenarios satisfy every computable and stay consistent") {
  Scenario s = Scenario::tsirelson();
  s.d_a = s.d_b = 8;
  s.n = 64;
  s.kind = StateKind::Product;
  s.chi_a = {cdouble{0.6, 0.0}, cdouble{0.8, 0.0}};
  s.chi_b = {cdouble{M_SQRT1_2, 0.0}, cdouble{0.0, M_SQRT1_2}};
  for (Model m : {Model::BornQM, Model::LambdaManyCounting, Model::LambdaOne}) {
    const ConditionReport rep = condition_report(m, s);
    CHECK(rep.pi->pass);
    CHECK(rep.oi->pass);
    CHECK(rep.completeness->pass);
    CHECK(rep.abs_chsh <= 2.0 + 0.2);  // counting error can nudge past 2 slightly
    CHECK(rep.audit.consistent());
  }
}

TEST_CASE("condition report: the four models produce the expected pattern") {
  Scenario s = Scenario::tsirelson();
  s.d_a = s.d_b = 16;
  s.n = 400;  // joint-cell rank 256 >= floor(400 * 0.427) + 1

  const ConditionReport born = condition_report(Model::BornQM, s);
  CHECK(born.pi->pass);
  CHECK_FALSE(born.oi->pass);
  CHECK_FALSE(born.completeness->pass);
  CHECK(born.abs_chsh == doctest::Approx(2.0 * M_SQRT2).epsilon(1e-9));
  CHECK_FALSE(born.flags.bell);
  CHECK(born.audit.consistent());

  const ConditionReport many = condition_report(Model::LambdaManyCounting, s);
  CHECK(many.pi->pass);
  CHECK_FALSE(many.oi->pass);
  CHECK_FALSE(many.completeness->pass);
  CHECK_FALSE(many.flags.bell);
  CHECK_FALSE(many.flags.unique);
  CHECK(many.audit.consistent());

  const ConditionReport one = condition_report(Model::LambdaOne, s);
  CHECK(one.factorizability->pass);
  CHECK_FALSE(one.flags.ind);
  CHECK_FALSE(one.flags.bell);
  CHECK(one.lambda_pi);
  CHECK_FALSE(one.lambda_pi->applicable);
  CHECK(one.audit.consistent());

  // With b = b' the lambda-one ensembles coincide, so the audit finds no
  // setting dependence and IND flips to true; CHSH degenerates to 2E and the
  // flag set is the deterministic-local one.
  Scenario degenerate = s;
  degenerate.b_prime = degenerate.b;
  const ConditionReport one_deg = condition_report(Model::LambdaOne, degenerate);
  CHECK(one_deg.flags.ind);
  CHECK(one_deg.lambda_pi->applicable);
  CHECK(one_deg.flags.bell);
  CHECK(one_deg.audit.consistent());

  const ConditionReport det = condition_report(Model::DeterministicLocal, s);
  CHECK(det.pi->pass);
  CHECK(det.oi->pass);
  CHECK(det.completeness->pass);
  CHECK(det.factorizability->pass);
  CHECK(det.abs_chsh == 2.0);
  CHECK(det.flags.bell);
  CHECK(det.audit.consistent());
}
