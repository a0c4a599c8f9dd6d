#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qmlab/eprb.hpp"
#include "qmlab/expansion.hpp"
#include "qmlab/hilbert.hpp"
#include "qmlab/random_states.hpp"

using namespace qmlab;

namespace {

// Closed form for the singlet: p(s,t) = (1 - s t cos(theta)) / 4 at relative
// angle theta between the two analyzer directions.
double singlet_cell(double theta, int s, int t) { return 0.25 * (1.0 - s * t * std::cos(theta)); }

}  // namespace

TEST_CASE("singlet state construction: spin part, roles, normalization") {
  const StateVector psi = singlet_state(3, 4);
  CHECK(psi.dims() == std::vector<std::size_t>{2, 3, 2, 4});
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(psi.roles()[0] == FactorRole::SpinA);
  CHECK(psi.roles()[1] == FactorRole::SpaceA);
  CHECK(psi.roles()[2] == FactorRole::SpinB);
  CHECK(psi.roles()[3] == FactorRole::SpaceB);
  // Overlap with the reference spin singlet tensored into the spatial slots.
  StateVector ref = StateVector::zero({2, 3, 2, 4});
  ref.at(((0 * 3 + 0) * 2 + 1) * 4 + 0) = cdouble{M_SQRT1_2, 0.0};
  ref.at(((1 * 3 + 0) * 2 + 0) * 4 + 0) = cdouble{-M_SQRT1_2, 0.0};
  CHECK(std::norm(inner(ref, psi)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("singlet: equal settings anticorrelate and marginals are unbiased") {
  const StateVector psi = singlet_state(2, 2);
  const Direction z(0, 0, 1);
  const Resolution r = joint_resolution(z, z, 2, 2);
  CHECK(born(psi, r[cell_index(+1, +1)]) <= 1e-14);
  CHECK(born(psi, r[cell_index(+1, -1)]) == doctest::Approx(0.5).epsilon(1e-12));
  const Projector alice_up = lift(spin_projector(z, +1), 0, psi.dims());
  CHECK(born(psi, alice_up) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("product state: aligned preparation is deterministic") {
  const StateVector psi = product_state({cdouble{1, 0}, cdouble{0, 0}},
                                        {cdouble{1, 0}, cdouble{0, 0}}, 2, 2);
  const Direction z(0, 0, 1);
  const JointDistribution d = joint_distribution(psi, z, z, Backend::Born);
  CHECK(d.p_of(+1, +1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.p_of(+1, -1) <= 1e-12);
  CHECK(d.p_of(-1, +1) <= 1e-12);
  CHECK(d.p_of(-1, -1) <= 1e-12);
}

TEST_CASE("product state: balanced spin gives a half marginal") {
  const StateVector psi = product_state({cdouble{M_SQRT1_2, 0}, cdouble{M_SQRT1_2, 0}},
                                        {cdouble{1, 0}, cdouble{0, 0}}, 2, 2);
  const JointDistribution d = joint_distribution(psi, Direction(0, 0, 1), Direction(0, 0, 1),
                                                 Backend::Born);
  CHECK(marginals(d).alice[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("product state rejects a zero spin part") {
  CHECK_THROWS_AS(product_state({cdouble{0, 0}, cdouble{0, 0}},
                                {cdouble{1, 0}, cdouble{0, 0}}, 2, 2),
                  std::invalid_argument);
}

TEST_CASE("joint resolution: ranks, completeness, singlet cells at z,z") {
  const Resolution r = joint_resolution(Direction(0, 0, 1), Direction(1, 0, 0), 4, 5);
  for (const Projector& p : r) CHECK(p.rank() == 20);
  rng::Stream st(61);
  const StateVector psi = random_state({2, 4, 2, 5}, st);
  double total = 0.0;
  for (const Projector& p : r) total += born(psi, p);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("joint distribution matches the singlet closed form across angles") {
  const StateVector psi = singlet_state(2, 2);
  for (double theta : {0.0, M_PI / 6, M_PI / 3, M_PI / 2, 2.0, M_PI}) {
    const JointDistribution d = joint_distribution(psi, Direction(0, 0, 1),
                                                   Direction::polar_xz(theta), Backend::Born);
    for (int s : {+1, -1})
      for (int t : {+1, -1})
        CHECK(d.p_of(s, t) == doctest::Approx(singlet_cell(theta, s, t)).epsilon(1e-9));
  }
  // Spot value: theta = 60 degrees, s = t = +1 -> 1/8.
  const JointDistribution d60 = joint_distribution(psi, Direction(0, 0, 1),
                                                   Direction::polar_xz(M_PI / 3), Backend::Born);
  CHECK(d60.p_of(+1, +1) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("joint distribution of a product state factorizes") {
  rng::Stream st(62);
  for (int rep = 0; rep < 10; ++rep) {
    const std::array<cdouble, 2> ca{st.next_complex_gaussian(), st.next_complex_gaussian()};
    const std::array<cdouble, 2> cb{st.next_complex_gaussian(), st.next_complex_gaussian()};
    const StateVector psi = product_state(ca, cb, 2, 3);
    const JointDistribution d =
        joint_distribution(psi, random_direction(st), random_direction(st), Backend::Born);
    const Marginals m = marginals(d);
    for (int s : {+1, -1})
      for (int t : {+1, -1})
        CHECK(d.p_of(s, t) ==
              doctest::Approx(m.alice[outcome_index(s)] * m.bob[outcome_index(t)])
                  .epsilon(1e-11));
  }
}

TEST_CASE("counting backend: singlet at z,z with n=1000 gives exact halves and no cats") {
  const StateVector psi = singlet_state(23, 23);
  const Direction z(0, 0, 1);
  const JointDistribution d = joint_distribution(psi, z, z, Backend::Counting, 1000);
  CHECK(d.p_of(+1, +1) == 0.0);
  CHECK(d.p_of(+1, -1) == doctest::Approx(0.5));
  CHECK(d.p_of(-1, +1) == doctest::Approx(0.5));
  CHECK(d.p_of(-1, -1) == 0.0);
  CHECK(d.cat_mass == 0.0);
}

TEST_CASE("counting and Born backends agree within 3/n per cell over 100 scenarios") {
  rng::Stream st(63);
  const std::size_t n = 64;
  for (int rep = 0; rep < 100; ++rep) {
    const bool singlet = st.next_double() < 0.5;
    const StateVector psi =
        singlet ? singlet_state(12, 12)
                : product_state({st.next_complex_gaussian(), st.next_complex_gaussian()},
                                {st.next_complex_gaussian(), st.next_complex_gaussian()}, 12, 12);
    const Direction x = random_direction(st);
    const Direction y = random_direction(st);
    const JointDistribution db = joint_distribution(psi, x, y, Backend::Born);
    const JointDistribution dc = joint_distribution(psi, x, y, Backend::Counting, n);
    double mass = dc.cat_mass;
    for (int s : {+1, -1})
      for (int t : {+1, -1}) {
        CHECK(std::abs(db.p_of(s, t) - dc.p_of(s, t)) <= 3.0 / n + 1e-12);
        CHECK(dc.p_of(s, t) >= 0.0);
        mass += dc.p_of(s, t);
      }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("marginals: singlet is unbiased; counting marginals track Born within 6/n") {
  const StateVector psi = singlet_state(12, 12);
  rng::Stream st(64);
  const Direction x = random_direction(st);
  const Direction y = random_direction(st);
  const JointDistribution db = joint_distribution(psi, x, y, Backend::Born);
  const Marginals mb = marginals(db);
  CHECK(mb.alice[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(mb.alice[1] == doctest::Approx(0.5).epsilon(1e-10));
  const std::size_t n = 128;
  const JointDistribution dc = joint_distribution(psi, x, y, Backend::Counting, n);
  const Marginals mc = marginals(dc);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(std::abs(mc.alice[k] - mb.alice[k]) <= 6.0 / n);
    CHECK(std::abs(mc.bob[k] - mb.bob[k]) <= 6.0 / n);
  }
}

TEST_CASE("conditionals: anticorrelation, product independence, and the degenerate guard") {
  const StateVector singlet = singlet_state(2, 2);
  const Direction z(0, 0, 1);
  const JointDistribution d = joint_distribution(singlet, z, z, Backend::Born);
  const auto cond = conditional(d, Side::Alice, +1);
  CHECK(cond[outcome_index(+1)] <= 1e-12);
  CHECK(cond[outcome_index(-1)] == doctest::Approx(1.0).epsilon(1e-12));

  rng::Stream st(65);
  const StateVector prod =
      product_state({st.next_complex_gaussian(), st.next_complex_gaussian()},
                    {cdouble{0.8, 0.0}, cdouble{0.6, 0.0}}, 2, 2);
  const JointDistribution dp =
      joint_distribution(prod, random_direction(st), random_direction(st), Backend::Born);
  const Marginals mp = marginals(dp);
  for (int given : {+1, -1}) {
    if (mp.bob[outcome_index(given)] <= 1e-6) continue;
    const auto c = conditional(dp, Side::Alice, given);
    CHECK(c[0] == doctest::Approx(mp.alice[0]).epsilon(1e-9));
  }

  const JointDistribution deterministic = joint_distribution(
      product_state({cdouble{1, 0}, cdouble{0, 0}}, {cdouble{1, 0}, cdouble{0, 0}}, 2, 2), z, z,
      Backend::Born);
  CHECK_THROWS_WITH_AS(conditional(deterministic, Side::Alice, -1), "undefined conditional",
                       std::invalid_argument);

  // Orthogonal settings make the singlet distribution uniform: every
  // conditional is 0.5.
  const JointDistribution uniform =
      joint_distribution(singlet, z, Direction(1, 0, 0), Backend::Born);
  for (Side side : {Side::Alice, Side::Bob})
    for (int given : {+1, -1}) {
      const auto c = conditional(uniform, side, given);
      CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-10));
      CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("correlation: the singlet law E = -cos(theta) holds on a grid") {
  const StateVector psi = singlet_state(2, 2);
  for (int k = 0; k <= 24; ++k) {
    const double theta = M_PI * k / 24.0;
    const JointDistribution d = joint_distribution(psi, Direction(0, 0, 1),
                                                   Direction::polar_xz(theta), Backend::Born);
    CHECK(std::abs(correlation(d) + std::cos(theta)) <= 1e-9);
  }
}

TEST_CASE("correlation endpoints: theta=0 gives -1, aligned product gives +1") {
  const StateVector singlet = singlet_state(2, 2);
  const Direction z(0, 0, 1);
  CHECK(correlation(joint_distribution(singlet, z, z, Backend::Born)) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  const StateVector prod =
      product_state({cdouble{1, 0}, cdouble{0, 0}}, {cdouble{1, 0}, cdouble{0, 0}}, 2, 2);
  CHECK(correlation(joint_distribution(prod, z, z, Backend::Born)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("CHSH: canonical angles reach 2 sqrt(2) under the Born backend") {
  Scenario s = Scenario::tsirelson();
  s.d_a = s.d_b = 2;
  const StateVector psi = singlet_state(2, 2);
  CHECK(std::abs(std::abs(chsh(psi, s, Backend::Born)) - 2.0 * M_SQRT2) <= 1e-9);
}

TEST_CASE("CHSH: degenerate settings collapse to 2 E(a,b)") {
  Scenario s;
  s.a_prime = s.a;
  s.b_prime = s.b;
  s.d_a = s.d_b = 2;
  const StateVector psi = singlet_state(2, 2);
  const double e = correlation(joint_distribution(psi, s.a, s.b, Backend::Born));
  CHECK(chsh(psi, s, Backend::Born) == doctest::Approx(2.0 * e).epsilon(1e-10));
  CHECK(std::abs(chsh(psi, s, Backend::Born)) <= 2.0 + 1e-12);
}

TEST_CASE("CHSH: counting backend lands within 48/n of the Born value") {
  Scenario s = Scenario::tsirelson();
  s.d_a = s.d_b = 23;
  s.n = 1000;
  const StateVector psi = singlet_state(23, 23);
  const double sb = chsh(psi, s, Backend::Born);
  const double sc = chsh(psi, s, Backend::Counting);
  CHECK(std::abs(sc - sb) <= 48.0 / 1000.0);
}

TEST_CASE("tensor product expansion realizes the product counting identity") {
  // Alice: weight 1/4 on spin-up at z, n_a = 4 -> m = (1, 3). Bob: balanced,
  // n_b = 2 -> m = (1, 1). Joint cell (+,+) must count 1*1 of 4*2 = 1/8.
  const Direction z(0, 0, 1);
  const StateVector phi = side_state({cdouble{0.5, 0.0}, cdouble{std::sqrt(3.0) / 2, 0.0}}, 4,
                                     true);
  const StateVector chi = side_state({cdouble{M_SQRT1_2, 0.0}, cdouble{M_SQRT1_2, 0.0}}, 2,
                                     false);
  const Resolution ra = marginal_resolution(z, 0, phi.dims());
  const Resolution rb = marginal_resolution(z, 0, chi.dims());
  const EquiampExpansion ea = expand_adapted(phi, ra, 4);
  const EquiampExpansion eb = expand_adapted(chi, rb, 2);
  REQUIRE(ea.adapted_info()->m[0] == 1);
  REQUIRE(eb.adapted_info()->m[0] == 1);
  const EquiampExpansion joint = tensor_product_expansion(ea, eb);
  REQUIRE(joint.n() == 8);
  CHECK(joint.validate().pass());
  const AdaptedInfo& info = *joint.adapted_info();
  CHECK(info.m[0] == 1);  // (+,+) = m_a m_b
  CHECK(info.m[1] == 1);
  CHECK(info.m[2] == 3);
  CHECK(info.m[3] == 3);
  CHECK(info.cats == 0);
  // Classification against the actual joint resolution agrees.
  const Resolution rj = joint_resolution(z, z, 4, 2);
  const CountingDistribution d = counting_distribution(joint, rj);
  CHECK(d.m[0] == 1);
  CHECK(d.p[0] == doctest::Approx(0.125));
}
