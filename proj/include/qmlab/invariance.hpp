#pragma once

// Numerical witnesses for the invariance hypothesis: swap unitaries that
// exchange equal-norm orthogonal components while fixing the total state, and
// invariance of the per-microstate counting measure under unitaries that fix
// a component.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qmlab/expansion.hpp"
#include "qmlab/hilbert.hpp"

namespace qmlab {

// U maps phi -> eta ||phi||/||eta||, eta -> phi ||eta||/||phi|| and is the
// identity on the orthogonal complement of span{phi, eta}. For equal norms
// this is a pure exchange. U is an involution.
inline Unitary swap_unitary(const StateVector& phi, const StateVector& eta) {
  if (phi.dims() != eta.dims()) throw std::invalid_argument("swap_unitary: dims mismatch");
  const double np = phi.norm();
  const double ne = eta.norm();
  if (!(np > 0.0) || !(ne > 0.0)) throw std::invalid_argument("swap_unitary: zero input");
  if (std::abs(inner(phi, eta)) > tau_orth * np * ne)
    throw std::invalid_argument("swap_unitary: inputs are not orthogonal");
  const std::size_t d = phi.size();
  std::vector<cdouble> a(d * d, cdouble{0.0, 0.0});
  for (std::size_t i = 0; i < d; ++i) a[i * d + i] = cdouble{1.0, 0.0};
  const auto& p = phi.amplitudes();
  const auto& e = eta.amplitudes();
  for (std::size_t r = 0; r < d; ++r) {
    const cdouble pr = p[r] / np;
    const cdouble er = e[r] / ne;
    cdouble* row = a.data() + r * d;
    for (std::size_t c = 0; c < d; ++c) {
      const cdouble pc = std::conj(p[c] / np);
      const cdouble ec = std::conj(e[c] / ne);
      row[c] += -pr * pc - er * ec + er * pc + pr * ec;
    }
  }
  return Unitary(d, std::move(a));
}

struct InvarianceReport {
  bool expansion_valid = false;   // {U xi_j} is an expansion of U psi
  double max_residual = 0.0;      // worst scaled residual across the checks
  double fixed_probability_before = 0.0;  // counting measure of the fixed microstate
  double fixed_probability_after = 0.0;
  bool fixed_class_preserved = false;
  bool pass = false;
};

// Checks the two displayed consequences of invariance for a unitary fixing
// one microstate: the transformed family is an equiamplitude expansion of
// U psi, the fixed microstate keeps its 1/n measure, and its membership class
// for a projector fixing it is unchanged.
inline InvarianceReport invariance_check(const StateVector& psi, const EquiampExpansion& e,
                                         const Unitary& u, std::size_t fixed) {
  if (fixed >= e.n()) throw std::invalid_argument("invariance_check: index out of range");
  const double r = e.common_norm();
  const StateVector& xi = e.microstate(fixed);
  StateVector uxi = apply_unitary(u, xi);
  {
    StateVector d = uxi;
    d -= xi;
    if (d.norm() > tau_orth * r) throw std::invalid_argument("unitary does not fix target");
  }
  std::vector<StateVector> mapped;
  mapped.reserve(e.n());
  for (const StateVector& m : e.microstates()) mapped.push_back(apply_unitary(u, m));
  EquiampExpansion ue(apply_unitary(u, psi), std::move(mapped));
  const ExpansionValidation v = ue.validate();

  InvarianceReport rep;
  rep.expansion_valid = v.pass();
  const double r2 = r * r;
  rep.max_residual = std::max({v.max_cross_overlap / r2, v.max_norm_dev / v.parent_norm,
                               v.sum_residual / v.parent_norm});
  rep.fixed_probability_before = 1.0 / static_cast<double>(e.n());
  rep.fixed_probability_after = 1.0 / static_cast<double>(ue.n());
  // Probe projector fixing U xi_fixed: the class of the fixed microstate must
  // be Eig1 on both sides.
  const Projector probe = Projector::onto(uxi);
  const auto cls_of = [&probe](const StateVector& x) {
    StateVector px = probe.apply(x);
    const double pn = px.norm();
    px -= x;
    if (px.norm() <= tau_cls * x.norm()) return MicrostateClass::Eig1;
    if (pn <= tau_cls * x.norm()) return MicrostateClass::Eig0;
    return MicrostateClass::Cat;
  };
  rep.fixed_class_preserved =
      cls_of(xi) == MicrostateClass::Eig1 && cls_of(ue.microstate(fixed)) == MicrostateClass::Eig1;
  rep.pass = rep.expansion_valid && rep.fixed_class_preserved &&
             rep.fixed_probability_before == rep.fixed_probability_after;
  return rep;
}

struct SwapWitness {
  double parent_residual = 0.0;     // ||U psi - psi|| / ||psi||
  double norm_multiset_dev = 0.0;   // sorted microstate norms, before vs after
  double unitarity_residual = 0.0;
  bool pass = false;
};

// Equal-norm orthogonal components can be exchanged by a unitary that fixes
// the total state: the numerical content of "equal norm implies equal
// probability" at the level of the counting measure.
inline SwapWitness equal_norm_symmetry_witness(const StateVector& psi, const EquiampExpansion& e,
                                               std::size_t i, std::size_t j) {
  if (i >= e.n() || j >= e.n())
    throw std::invalid_argument("equal_norm_symmetry_witness: index out of range");
  SwapWitness w;
  const double pn = psi.norm();
  if (i == j) {
    w.pass = true;
    return w;
  }
  const Unitary u = swap_unitary(e.microstate(i), e.microstate(j));
  w.unitarity_residual = u.unitarity_residual();
  {
    StateVector d = apply_unitary(u, psi);
    d -= psi;
    w.parent_residual = d.norm() / pn;
  }
  std::vector<double> before, after;
  before.reserve(e.n());
  after.reserve(e.n());
  for (const StateVector& m : e.microstates()) {
    before.push_back(m.norm());
    after.push_back(apply_unitary(u, m).norm());
  }
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  for (std::size_t k = 0; k < before.size(); ++k)
    w.norm_multiset_dev = std::max(w.norm_multiset_dev, std::abs(before[k] - after[k]));
  w.pass = w.parent_residual <= tau_exp && w.norm_multiset_dev <= tau_exp * pn &&
           w.unitarity_residual <= tau_orth;
  return w;
}

}  // namespace qmlab
