#pragma once

// The EPRB setup on (spin (x) space) (x) (spin (x) space): singlet and product
// states, joint outcome resolutions, joint/marginal/conditional distributions
// under the Born and counting backends, correlation functions, and CHSH.
//
// Factor order is fixed globally as (spin-A, space-A, spin-B, space-B).
// Angles are radians everywhere.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmlab/expansion.hpp"
#include "qmlab/hilbert.hpp"

namespace qmlab {

enum class Backend { Born, Counting };

enum class StateKind { Singlet, Product };

inline std::size_t outcome_index(int s) {
  if (s == +1) return 0;
  if (s == -1) return 1;
  throw std::invalid_argument("outcome must be +1 or -1");
}
inline int index_outcome(std::size_t i) { return i == 0 ? +1 : -1; }

// Cell order (+,+), (+,-), (-,+), (-,-).
inline std::size_t cell_index(int s, int t) { return outcome_index(s) * 2 + outcome_index(t); }

struct Scenario {
  Direction a = Direction::polar_xz(0.0);
  Direction a_prime = Direction::polar_xz(M_PI / 2);
  Direction b = Direction::polar_xz(M_PI / 4);
  Direction b_prime = Direction::polar_xz(3 * M_PI / 4);
  std::size_t d_a = 32;
  std::size_t d_b = 32;
  StateKind kind = StateKind::Singlet;
  std::array<cdouble, 2> chi_a{cdouble{1.0, 0.0}, cdouble{0.0, 0.0}};
  std::array<cdouble, 2> chi_b{cdouble{1.0, 0.0}, cdouble{0.0, 0.0}};
  std::size_t n = 1000;
  Backend backend = Backend::Born;

  // The canonical coplanar CHSH geometry: a=0, a'=pi/2, b=pi/4, b'=3pi/4.
  static Scenario tsirelson() { return Scenario{}; }

  std::array<std::pair<Direction, Direction>, 4> setting_pairs() const {
    return {std::pair{a, b}, std::pair{a, b_prime}, std::pair{a_prime, b},
            std::pair{a_prime, b_prime}};
  }
  static const char* pair_name(std::size_t i) {
    static const char* names[4] = {"ab", "ab'", "a'b", "a'b'"};
    return names[i];
  }
};

// Spin singlet on the spin factors, fixed reference spatial states elsewhere.
inline StateVector singlet_state(std::size_t d_a, std::size_t d_b) {
  if (d_a < 1 || d_b < 1) throw std::invalid_argument("singlet_state: spatial dims must be >= 1");
  StateVector psi = StateVector::zero({2, d_a, 2, d_b});
  const double c = 1.0 / std::sqrt(2.0);
  // index = ((sA*d_a + xA)*2 + sB)*d_b + xB with xA = xB = 0
  psi.at(((0 * d_a + 0) * 2 + 1) * d_b + 0) = cdouble{c, 0.0};
  psi.at(((1 * d_a + 0) * 2 + 0) * d_b + 0) = cdouble{-c, 0.0};
  psi.set_roles({FactorRole::SpinA, FactorRole::SpaceA, FactorRole::SpinB, FactorRole::SpaceB});
  return psi;
}

// One side of a product preparation: chi on the spin factor, the first basis
// vector on the spatial factor.
inline StateVector side_state(const std::array<cdouble, 2>& chi, std::size_t d, bool alice) {
  const double n2 = std::norm(chi[0]) + std::norm(chi[1]);
  if (!(n2 > 0.0)) throw std::invalid_argument("product_state: zero spin state");
  StateVector spin({2}, {chi[0], chi[1]});
  StateVector space = StateVector::basis_state({d}, 0);
  StateVector out = tensor(spin, space).normalized();
  out.set_roles(alice ? std::vector<FactorRole>{FactorRole::SpinA, FactorRole::SpaceA}
                      : std::vector<FactorRole>{FactorRole::SpinB, FactorRole::SpaceB});
  return out;
}

inline StateVector product_state(const std::array<cdouble, 2>& chi_a,
                                 const std::array<cdouble, 2>& chi_b, std::size_t d_a,
                                 std::size_t d_b) {
  return tensor(side_state(chi_a, d_a, true), side_state(chi_b, d_b, false));
}

inline StateVector scenario_state(const Scenario& s) {
  return s.kind == StateKind::Singlet ? singlet_state(s.d_a, s.d_b)
                                      : product_state(s.chi_a, s.chi_b, s.d_a, s.d_b);
}

// The four outcome cells P_s^x (x) P_t^y, lifted to the full space.
inline Resolution joint_resolution(const Direction& x, const Direction& y, std::size_t d_a,
                                   std::size_t d_b) {
  const std::vector<std::size_t> dims{2, d_a, 2, d_b};
  std::vector<Projector> cells;
  cells.reserve(4);
  for (int s : {+1, -1}) {
    const Projector ps = spin_projector(x, s);
    std::vector<cdouble> us = ps.basis_vector(0).amplitudes();
    for (int t : {+1, -1}) {
      const Projector pt = spin_projector(y, t);
      std::vector<cdouble> vt = pt.basis_vector(0).amplitudes();
      cells.push_back(Projector::from_blocks(dims, {{0, {us}}, {2, {vt}}}));
    }
  }
  return Resolution(std::move(cells), false);
}

// {P_+ (x) I, P_- (x) I} for one side; slot 0 is Alice's spin, slot 2 Bob's.
inline Resolution marginal_resolution(const Direction& x, std::size_t slot,
                                      std::vector<std::size_t> dims) {
  std::vector<Projector> cells;
  for (int s : {+1, -1}) cells.push_back(lift(spin_projector(x, s), slot, dims));
  return Resolution(std::move(cells), false);
}

struct JointDistribution {
  Direction x, y;
  Backend backend = Backend::Born;
  std::array<double, 4> p{};  // cell order (+,+), (+,-), (-,+), (-,-)
  double cat_mass = 0.0;      // 0 for the Born backend

  double p_of(int s, int t) const { return p[cell_index(s, t)]; }
};

inline JointDistribution joint_distribution(const StateVector& psi, const Direction& x,
                                            const Direction& y, Backend backend,
                                            std::size_t n = 0) {
  if (psi.dims().size() != 4)
    throw std::invalid_argument("joint_distribution: expected a 4-factor EPRB state");
  const std::size_t d_a = psi.dims()[1];
  const std::size_t d_b = psi.dims()[3];
  const Resolution r = joint_resolution(x, y, d_a, d_b);
  JointDistribution d;
  d.x = x;
  d.y = y;
  d.backend = backend;
  if (backend == Backend::Born) {
    for (std::size_t c = 0; c < 4; ++c) d.p[c] = born(psi, r[c]);
    d.cat_mass = 0.0;
  } else {
    if (n == 0) throw std::invalid_argument("joint_distribution: counting backend needs n");
    const EquiampExpansion e = expand_adapted(psi, r, n);
    const AdaptedInfo& info = *e.adapted_info();
    for (std::size_t c = 0; c < 4; ++c)
      d.p[c] = static_cast<double>(info.m[c]) / static_cast<double>(n);
    d.cat_mass = static_cast<double>(info.cats) / static_cast<double>(n);
  }
  return d;
}

struct Marginals {
  std::array<double, 2> alice{};  // index 0 -> s=+1, 1 -> s=-1
  std::array<double, 2> bob{};
};

inline Marginals marginals(const JointDistribution& d) {
  Marginals m;
  for (int s : {+1, -1})
    for (int t : {+1, -1}) {
      m.alice[outcome_index(s)] += d.p_of(s, t);
      m.bob[outcome_index(t)] += d.p_of(s, t);
    }
  return m;
}

enum class Side { Alice, Bob };

// Outcome probabilities on `side` conditional on the other side's outcome.
inline std::array<double, 2> conditional(const JointDistribution& d, Side side, int given) {
  const Marginals m = marginals(d);
  const double pg = (side == Side::Alice) ? m.bob[outcome_index(given)]
                                          : m.alice[outcome_index(given)];
  if (pg <= eps_cond) throw std::invalid_argument("undefined conditional");
  std::array<double, 2> out{};
  for (int o : {+1, -1}) {
    const double joint = (side == Side::Alice) ? d.p_of(o, given) : d.p_of(given, o);
    out[outcome_index(o)] = joint / pg;
  }
  return out;
}

// E = sum_{s,t} s t p(s,t).
inline double correlation(const JointDistribution& d) {
  double e = 0.0;
  for (int s : {+1, -1})
    for (int t : {+1, -1}) e += s * t * d.p_of(s, t);
  return e;
}

inline double chsh_from_correlations(double e_ab, double e_abp, double e_apb, double e_apbp) {
  return e_ab - e_abp + e_apb + e_apbp;
}

// S = E(a,b) - E(a,b') + E(a',b) + E(a',b'); verdicts use |S|.
inline double chsh(const StateVector& psi, const Scenario& s, Backend backend) {
  const auto pairs = s.setting_pairs();
  std::array<double, 4> e{};
  for (std::size_t i = 0; i < 4; ++i)
    e[i] = correlation(joint_distribution(psi, pairs[i].first, pairs[i].second, backend, s.n));
  return chsh_from_correlations(e[0], e[1], e[2], e[3]);
}

// Product of two expansions: n_a * n_b microstates xi_i (x) eta_j. If both
// factors carry adapted provenance over binary cells, the product is adapted
// to the joint resolution with cell = (Alice cell)*2 + (Bob cell).
inline EquiampExpansion tensor_product_expansion(const EquiampExpansion& ea,
                                                 const EquiampExpansion& eb) {
  std::vector<StateVector> micro;
  micro.reserve(ea.n() * eb.n());
  for (std::size_t i = 0; i < ea.n(); ++i)
    for (std::size_t j = 0; j < eb.n(); ++j)
      micro.push_back(tensor(ea.microstate(i), eb.microstate(j)));
  std::optional<AdaptedInfo> info;
  if (ea.adapted_info() && eb.adapted_info()) {
    const AdaptedInfo& ia = *ea.adapted_info();
    const AdaptedInfo& ib = *eb.adapted_info();
    AdaptedInfo joint;
    joint.cell_count = ia.cell_count * ib.cell_count;
    joint.m.assign(joint.cell_count, 0);
    joint.cell_of.reserve(micro.size());
    for (std::size_t i = 0; i < ea.n(); ++i)
      for (std::size_t j = 0; j < eb.n(); ++j) {
        const int ca = ia.cell_of[i];
        const int cb = ib.cell_of[j];
        if (ca < 0 || cb < 0) {
          joint.cell_of.push_back(-1);
          ++joint.cats;
        } else {
          const int cell = ca * static_cast<int>(ib.cell_count) + cb;
          joint.cell_of.push_back(cell);
          ++joint.m[static_cast<std::size_t>(cell)];
        }
      }
    info = std::move(joint);
  }
  return EquiampExpansion(tensor(ea.parent(), eb.parent()), std::move(micro), std::move(info));
}

}  // namespace qmlab
