#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "qmlab/conditions.hpp"
#include "qmlab/eprb.hpp"
#include "qmlab/lambda_one.hpp"
#include "qmlab/random_states.hpp"

using namespace qmlab;
using namespace qmlab::lambda_one;

namespace {

Scenario lab_scenario(std::size_t d, std::size_t n) {
  Scenario s = Scenario::tsirelson();
  s.d_a = s.d_b = d;
  s.n = n;
  s.backend = Backend::Counting;
  return s;
}

}  // namespace

TEST_CASE("ensembles: singlet at z,z puts 500 microstates in each anticorrelated cell") {
  Scenario s = lab_scenario(23, 1000);
  s.b = s.a;  // first pair at equal settings
  const StateVector psi = scenario_state(s);
  const auto ensembles = build_ensembles(psi, s, 1000);
  const AdaptedInfo& info = *ensembles[0].adapted_info();
  CHECK(info.m[cell_index(+1, -1)] == 500);
  CHECK(info.m[cell_index(-1, +1)] == 500);
  CHECK(info.m[cell_index(+1, +1)] == 0);
  CHECK(info.m[cell_index(-1, -1)] == 0);
  CHECK(info.cats == 0);
}

TEST_CASE("ensembles: a fully aligned product state concentrates on one cell") {
  Scenario s = lab_scenario(6, 24);
  s.kind = StateKind::Product;
  s.a = Direction(0, 0, 1);
  s.b = Direction(0, 0, 1);
  const StateVector psi = scenario_state(s);
  const auto ensembles = build_ensembles(psi, s, 24);
  const AdaptedInfo& info = *ensembles[0].adapted_info();
  CHECK(info.m[cell_index(+1, +1)] == 24);
  CHECK(info.cats == 0);
}

TEST_CASE("ensembles: n below the cell count is rejected") {
  Scenario s = lab_scenario(4, 16);
  const StateVector psi = scenario_state(s);
  CHECK_THROWS_AS(build_ensembles(psi, s, 3), std::invalid_argument);
}

TEST_CASE("trials: deterministic outcomes per microstate, anticorrelated at equal settings") {
  Scenario s = lab_scenario(8, 100);
  s.b = s.a;
  const StateVector psi = scenario_state(s);
  const auto ensembles = build_ensembles(psi, s, 100);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const TrialRecord rec = sample_trial(ensembles[0], 0, 99, t);
    if (rec.cat_skip) continue;
    CHECK(rec.s == -rec.t);
  }
}

TEST_CASE("trials: an ensemble of a joint eigenstate always yields its cell") {
  Scenario s = lab_scenario(2, 4);
  s.kind = StateKind::Product;
  s.b = s.a;  // aligned settings make e0 (x) e0 a (+,+) eigenstate
  const StateVector psi = scenario_state(s);
  const Resolution r = joint_resolution(s.a, s.b, 2, 2);
  const EquiampExpansion e = expand_adapted(psi, r, 4);
  for (std::uint64_t t = 0; t < 20; ++t) {
    const TrialRecord rec = sample_trial(e, 0, 5, t);
    CHECK_FALSE(rec.cat_skip);
    CHECK(rec.s == +1);
    CHECK(rec.t == +1);
  }
}

TEST_CASE("trials: a fixed seed reproduces the identical record stream") {
  Scenario s = lab_scenario(8, 64);
  const StateVector psi = scenario_state(s);
  const auto ensembles = build_ensembles(psi, s, 64);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const TrialRecord r1 = sample_trial(ensembles[2], 2, 1234, t);
    const TrialRecord r2 = sample_trial(ensembles[2], 2, 1234, t);
    CHECK(r1.microstate == r2.microstate);
    CHECK(r1.s == r2.s);
    CHECK(r1.t == r2.t);
    CHECK(r1.cat_skip == r2.cat_skip);
  }
}

TEST_CASE("runs: empirical frequencies approach the counting values at 10^5 trials") {
  Scenario s = lab_scenario(12, 200);
  const StateVector psi = scenario_state(s);
  const RunResult r = run_experiment(psi, s, 200, 100000, 2024);
  for (std::size_t pair = 0; pair < 4; ++pair) {
    const PairStats& ps = r.pairs[pair];
    for (std::size_t c = 0; c < 4; ++c) {
      const double want = static_cast<double>(r.counting_m[pair][c]) / 200.0;
      const double sigma = std::sqrt(std::max(want * (1.0 - want), 1e-6) / 1e5);
      CHECK(std::abs(ps.freq[c] - want) <= 4.0 * sigma + 3.0 / 200.0);
    }
  }
}

TEST_CASE("runs: Tsirelson-angle singlet beats the classical bound by a wide margin") {
  Scenario s = lab_scenario(23, 1000);
  const StateVector psi = scenario_state(s);
  const RunResult r = run_experiment(psi, s, 1000, 100000, 7);
  CHECK(std::abs(r.s_hat) > 2.5);
  double cat_frac = 0.0;
  for (const PairStats& ps : r.pairs) cat_frac = std::max(cat_frac, ps.cat_fraction);
  CHECK(cat_frac <= 3.0 / 1000.0);
}

TEST_CASE("runs: product states stay inside the classical bound statistically") {
  rng::Stream st(91);
  Scenario s = lab_scenario(10, 80);
  s.kind = StateKind::Product;
  s.chi_a = {st.next_complex_gaussian(), st.next_complex_gaussian()};
  s.chi_b = {st.next_complex_gaussian(), st.next_complex_gaussian()};
  const StateVector psi = scenario_state(s);
  const RunResult r = run_experiment(psi, s, 80, 20000, 11);
  CHECK(std::abs(r.s_hat) <= 2.0 + 4.0 * r.s_std_err + 4.0 * (4.0 * 3.0 / 80.0));
}

TEST_CASE("runs: identical configurations replay bit-identically") {
  Scenario s = lab_scenario(8, 64);
  const StateVector psi = scenario_state(s);
  const RunResult r1 = run_experiment(psi, s, 64, 5000, 99);
  const RunResult r2 = run_experiment(psi, s, 64, 5000, 99);
  for (std::size_t pair = 0; pair < 4; ++pair) {
    CHECK(r1.pairs[pair].counts == r2.pairs[pair].counts);
    CHECK(r1.pairs[pair].cat_skips == r2.pairs[pair].cat_skips);
  }
  CHECK(r1.s_hat == r2.s_hat);
}

TEST_CASE("runs: the fixed-pair schedule touches only the requested pair") {
  Scenario s = lab_scenario(8, 64);
  const StateVector psi = scenario_state(s);
  const RunResult r = run_experiment(psi, s, 64, 2000, 5, Schedule::FixedPair, 1);
  CHECK(r.pairs[1].total == 2000);
  CHECK(r.pairs[0].total == 0);
  CHECK(r.pairs[2].total == 0);
  CHECK(r.pairs[3].total == 0);
}

TEST_CASE("runs: trial streams are keyed by pair, not by schedule") {
  // Counter-based derivation means a pair's counts cannot depend on which
  // other pairs were sampled in the same run.
  Scenario s = lab_scenario(8, 64);
  const StateVector psi = scenario_state(s);
  const RunResult round_robin = run_experiment(psi, s, 64, 3000, 17, Schedule::RoundRobin);
  for (std::size_t pair = 0; pair < 4; ++pair) {
    const RunResult fixed = run_experiment(psi, s, 64, 3000, 17, Schedule::FixedPair, pair);
    CHECK(fixed.pairs[pair].counts == round_robin.pairs[pair].counts);
    CHECK(fixed.pairs[pair].cat_skips == round_robin.pairs[pair].cat_skips);
  }
}

TEST_CASE("sampled microstates satisfy the factorizability check") {
  Scenario s = lab_scenario(8, 60);
  const StateVector psi = scenario_state(s);
  const Resolution r = joint_resolution(s.a, s.b, 8, 8);
  const EquiampExpansion e = expand_adapted(psi, r, 60);
  std::vector<std::size_t> sample;
  const AdaptedInfo& info = *e.adapted_info();
  for (std::size_t i = 0; i < e.n() && sample.size() < 12; ++i)
    if (info.cell_of[i] >= 0) sample.push_back(i);
  const auto tables = factorizability_tables(e, s.a, s.b, sample);
  CHECK(check_factorizability(tables).pass);
}

TEST_CASE("contextuality audit: singlet ensembles for z vs x are disjoint, marginals agree") {
  const StateVector psi = singlet_state(8, 8);
  const Direction z(0, 0, 1);
  const Direction x(1, 0, 0);
  const ContextualityReport rep = contextuality_audit(psi, z, z, x, 100, true);
  CHECK(rep.applicable);
  CHECK(rep.overlap_scanned);
  CHECK(rep.disjoint);
  CHECK(rep.max_cross_overlap < 1.0 - 1e-6);
  CHECK(rep.alice_counts_1[0] == 50);
  CHECK(rep.alice_counts_2[0] == 50);
  CHECK(rep.max_marginal_shift <= 3);
  CHECK(rep.marginal_preserved);
  CHECK(rep.setting_dependent);
}

TEST_CASE("contextuality audit: singlet marginal counts at n=1000 stay within the allowance") {
  const StateVector psi = singlet_state(23, 23);
  const Direction z(0, 0, 1);
  const Direction tilt = Direction::polar_xz(1.1);
  const ContextualityReport rep = contextuality_audit(psi, z, z, tilt, 1000, false);
  CHECK(rep.applicable);
  CHECK(rep.alice_counts_1[0] == 500);
  CHECK(rep.max_marginal_shift <= 3);
  CHECK(rep.marginal_preserved);
}

TEST_CASE("contextuality audit: the same remote setting is reported not applicable") {
  const StateVector psi = singlet_state(4, 4);
  const Direction z(0, 0, 1);
  const ContextualityReport rep = contextuality_audit(psi, z, z, z, 16);
  CHECK_FALSE(rep.applicable);
}

TEST_CASE("product states: the tensor route keeps Alice's counts identical across y") {
  // Build Alice's expansion once and pair it with two different Bob
  // expansions; Alice's per-outcome counts cannot move at all.
  const Direction z(0, 0, 1);
  const Direction x(1, 0, 0);
  rng::Stream st(92);
  const std::array<cdouble, 2> ca{st.next_complex_gaussian(), st.next_complex_gaussian()};
  const std::array<cdouble, 2> cb{st.next_complex_gaussian(), st.next_complex_gaussian()};
  const StateVector phi = side_state(ca, 12, true);
  const StateVector chi = side_state(cb, 12, false);
  const EquiampExpansion ea = expand_adapted(phi, marginal_resolution(z, 0, phi.dims()), 10);
  const EquiampExpansion eb1 = expand_adapted(chi, marginal_resolution(z, 0, chi.dims()), 10);
  const EquiampExpansion eb2 = expand_adapted(chi, marginal_resolution(x, 0, chi.dims()), 10);
  const EquiampExpansion j1 = tensor_product_expansion(ea, eb1);
  const EquiampExpansion j2 = tensor_product_expansion(ea, eb2);
  // Classified against Alice's lifted projector, the counts cannot move: her
  // factor expansion is untouched by Bob's choice.
  const Projector alice_up = lift(spin_projector(z, +1), 0, j1.parent().dims());
  const ClassCounts c1 = classify(j1, alice_up);
  const ClassCounts c2 = classify(j2, alice_up);
  CHECK(c1.eig1 == c2.eig1);
  CHECK(c1.eig0 == c2.eig0);
  const std::size_t ma_up = ea.adapted_info()->m[0];
  CHECK(c1.eig1 == ma_up * eb1.n());
}
