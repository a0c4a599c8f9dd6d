#pragma once

// Equiamplitude expansions: generic seeded expansions, adapted expansions with
// a bounded cat-state count relative to a resolution, microstate
// classification, counting probabilities, and imprecise probability bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qmlab/hilbert.hpp"
#include "qmlab/random_states.hpp"
#include "qmlab/rng.hpp"

namespace qmlab {

enum class MicrostateClass { Eig1, Eig0, Cat };

struct ClassCounts {
  std::size_t eig1 = 0;
  std::size_t eig0 = 0;
  std::size_t cat = 0;
};

struct ImpreciseProbability {
  double lower = 0.0;
  double upper = 1.0;
  bool contains(double p, double slack = 0.0) const {
    return p >= lower - slack && p <= upper + slack;
  }
};

// How far a constructed family is from being a valid equiamplitude expansion.
struct ExpansionValidation {
  double max_cross_overlap = 0.0;  // max |<xi_i, xi_j>|, i != j
  double max_norm_dev = 0.0;       // max | ||xi_j|| - r |
  double sum_residual = 0.0;       // || sum_j xi_j - psi ||
  double common_norm = 0.0;        // r
  double parent_norm = 0.0;

  bool pass(double tol = tau_exp) const {
    return max_cross_overlap <= tol * common_norm * common_norm &&
           max_norm_dev <= tol * parent_norm && sum_residual <= tol * parent_norm;
  }
};

// Per-microstate provenance recorded by the adapted construction.
struct AdaptedInfo {
  std::size_t cell_count = 0;
  std::vector<std::size_t> m;  // eigenstate microstates per cell
  std::size_t cats = 0;
  std::vector<int> cell_of;    // cell index per microstate, -1 for cats
};

class EquiampExpansion {
 public:
  EquiampExpansion(StateVector parent, std::vector<StateVector> microstates,
                   std::optional<AdaptedInfo> info = std::nullopt)
      : parent_(std::move(parent)), micro_(std::move(microstates)), info_(std::move(info)) {
    if (micro_.empty()) throw std::invalid_argument("EquiampExpansion: no microstates");
    common_norm_ = parent_.norm() / std::sqrt(static_cast<double>(micro_.size()));
    if (info_ && info_->cell_of.size() != micro_.size())
      throw std::invalid_argument("EquiampExpansion: provenance size mismatch");
  }

  std::size_t n() const { return micro_.size(); }
  const StateVector& parent() const { return parent_; }
  const StateVector& microstate(std::size_t i) const { return micro_[i]; }
  const std::vector<StateVector>& microstates() const { return micro_; }
  double common_norm() const { return common_norm_; }
  const std::optional<AdaptedInfo>& adapted_info() const { return info_; }

  // pair_limit == 0 checks all pairs; otherwise a seeded sample of pairs.
  ExpansionValidation validate(std::size_t pair_limit = 0) const {
    ExpansionValidation v;
    v.common_norm = common_norm_;
    v.parent_norm = parent_.norm();
    for (const StateVector& xi : micro_)
      v.max_norm_dev = std::max(v.max_norm_dev, std::abs(xi.norm() - common_norm_));
    StateVector sum = StateVector::zero(parent_.dims());
    for (const StateVector& xi : micro_) sum += xi;
    sum -= parent_;
    v.sum_residual = sum.norm();
    const std::size_t nn = micro_.size();
    if (pair_limit == 0 || pair_limit >= nn * (nn - 1) / 2) {
      for (std::size_t i = 0; i < nn; ++i)
        for (std::size_t j = i + 1; j < nn; ++j)
          v.max_cross_overlap =
              std::max(v.max_cross_overlap, std::abs(inner(micro_[i], micro_[j])));
    } else {
      rng::Stream st(0xfacade);
      for (std::size_t k = 0; k < pair_limit; ++k) {
        const std::size_t i = st.next_index(nn);
        std::size_t j = st.next_index(nn - 1);
        if (j >= i) ++j;
        v.max_cross_overlap =
            std::max(v.max_cross_overlap, std::abs(inner(micro_[i], micro_[j])));
      }
    }
    return v;
  }

 private:
  StateVector parent_;
  std::vector<StateVector> micro_;
  double common_norm_ = 0.0;
  std::optional<AdaptedInfo> info_;
};

namespace detail {

// Split v = alpha * frame[0] (alpha = sqrt(sum targets^2)) into parts with the
// prescribed norms, mutually orthogonal and summing to v, inside span(frame).
// One real Householder reflection V with V t = alpha e_0 does it: the parts
// are the columns of V, expressed in the frame, scaled by the targets.
inline std::vector<StateVector> split_in_frame(const std::vector<StateVector>& frame,
                                               const std::vector<double>& targets) {
  if (frame.size() != targets.size() || frame.empty())
    throw std::invalid_argument("split_in_frame: frame/target size mismatch");
  double alpha2 = 0.0;
  for (double t : targets) alpha2 += t * t;
  const double alpha = std::sqrt(alpha2);
  if (!(alpha > 0.0)) throw std::invalid_argument("split_in_frame: zero mass");
  // v2 = t + alpha e_0; the plus sign keeps the reflection well conditioned
  // because all targets are nonnegative.
  const double nv2 = 2.0 * alpha * (alpha + targets[0]);
  StateVector g = StateVector::zero(frame[0].dims());
  for (std::size_t j = 0; j < frame.size(); ++j) {
    const double v2j = targets[j] + (j == 0 ? alpha : 0.0);
    if (v2j != 0.0) g.add_scaled(frame[j], cdouble{v2j, 0.0});
  }
  std::vector<StateVector> parts;
  parts.reserve(frame.size());
  for (std::size_t j = 0; j < frame.size(); ++j) {
    const double v2j = targets[j] + (j == 0 ? alpha : 0.0);
    StateVector w = frame[j];
    w.add_scaled(g, cdouble{-2.0 * v2j / nv2, 0.0});
    w *= cdouble{-targets[j], 0.0};
    parts.push_back(std::move(w));
  }
  return parts;
}

// Orthonormal f_0..f_{count-1} inside range(P) with f_0 = phi_hat, built from
// the projector's own range basis by a rank-1 (complex Householder) update.
inline std::vector<StateVector> range_frame(const Projector& p, const StateVector& phi_hat,
                                            std::size_t count) {
  std::vector<StateVector> frame;
  if (count == 0) return frame;
  if (count > p.rank()) throw std::invalid_argument("range_frame: count exceeds rank");
  frame.reserve(count);
  frame.push_back(phi_hat);
  if (count == 1) return frame;
  const StateVector b0 = p.basis_vector(0);
  const cdouble beta0 = inner(b0, phi_hat);
  const double ab0 = std::abs(beta0);
  const cdouble sigma = ab0 > 0.0 ? beta0 / ab0 : cdouble{1.0, 0.0};
  const double denom = 2.0 * (1.0 + ab0);
  StateVector w = phi_hat;
  w.add_scaled(b0, sigma);
  for (std::size_t j = 1; j < count; ++j) {
    StateVector f = p.basis_vector(j);
    const cdouble betaj = inner(f, phi_hat);
    f *= -sigma;
    f.add_scaled(w, 2.0 * sigma * std::conj(betaj) / denom);
    frame.push_back(std::move(f));
  }
  return frame;
}

}  // namespace detail

// The counting allocation behind adapted expansions: m_i = floor(n a_i^2 /
// ||psi||^2) with a snap band so that exactly divisible weights land on the
// exact integer instead of depending on rounding direction.
struct CellAllocation {
  std::size_t m = 0;
  double norm2 = 0.0;       // ||P_i psi||^2
  double remainder2 = 0.0;  // delta_i^2; 0 when the cell fits exactly
  bool occupied = false;
  bool exact_fit = false;
  bool promoted = false;
};

struct CountingAllocation {
  std::vector<CellAllocation> cells;
  std::size_t n = 0;
  std::size_t cats = 0;
  double r2 = 0.0;  // ||psi||^2 / n

  double probability(std::size_t i) const {
    return static_cast<double>(cells[i].m) / static_cast<double>(n);
  }
  double cat_mass() const { return static_cast<double>(cats) / static_cast<double>(n); }
};

inline CountingAllocation counting_allocation(const StateVector& psi, const Resolution& r,
                                              std::size_t n) {
  if (n < 1) throw std::invalid_argument("counting_allocation: n must be positive");
  const double psi2 = psi.norm2();
  if (!(psi2 > 0.0)) throw std::invalid_argument("degenerate state");
  constexpr double eps_snap = 1e-9;
  CountingAllocation out;
  out.n = n;
  out.r2 = psi2 / static_cast<double>(n);
  out.cells.resize(r.size());
  std::size_t assigned = 0;
  std::vector<std::size_t> promoted_cells;
  bool genuine_remainder = false;
  for (std::size_t i = 0; i < r.size(); ++i) {
    CellAllocation& c = out.cells[i];
    c.norm2 = r[i].range_norm2(psi);
    c.occupied = c.norm2 > 1e-20 * psi2;
    if (!c.occupied) {
      c.exact_fit = true;
      continue;
    }
    const double x = c.norm2 / out.r2;
    double mf = std::floor(x);
    double frac = x - mf;
    if (frac >= 1.0 - eps_snap) {
      mf += 1.0;
      frac = 0.0;
      c.promoted = true;
      promoted_cells.push_back(i);
    }
    c.m = static_cast<std::size_t>(mf);
    if (frac <= eps_snap) {
      if (c.m >= 1 || c.promoted) {
        c.exact_fit = true;
      } else {
        c.remainder2 = c.norm2;  // tiny unallocated crumb, must ride a cat
        genuine_remainder = true;
      }
    } else {
      c.remainder2 = c.norm2 - static_cast<double>(c.m) * out.r2;
      genuine_remainder = true;
    }
    assigned += c.m;
  }
  if (assigned > n)
    throw std::runtime_error("counting_allocation: allocation exceeded n");
  out.cats = n - assigned;
  if (out.cats == 0 && genuine_remainder) {
    // A promotion consumed the cat slot a genuine remainder needs; undo one.
    if (!promoted_cells.empty()) {
      CellAllocation& c = out.cells[promoted_cells.back()];
      c.m -= 1;
      c.promoted = false;
      c.exact_fit = false;
      c.remainder2 = c.norm2 - static_cast<double>(c.m) * out.r2;
      out.cats = 1;
    } else {
      double rem = 0.0;
      for (const CellAllocation& c : out.cells)
        if (!c.exact_fit) rem += c.remainder2;
      if (rem > 1e-20 * psi2)
        throw std::runtime_error("counting_allocation: remainder mass with no cat budget");
      for (CellAllocation& c : out.cells)
        if (!c.exact_fit) {
          c.remainder2 = 0.0;
          c.exact_fit = true;
        }
    }
  }
  return out;
}

// EE2-style construction, generalized to a k-cell resolution: at most k-1
// microstates are cats, exactly m_i are eigenstates of cell i, and the rest of
// the mass is packed into equal-norm cat states spanning the cell remainders.
inline EquiampExpansion expand_adapted(const StateVector& psi, const Resolution& r,
                                       std::size_t n) {
  if (n < r.size()) throw std::invalid_argument("expand_adapted: n must be at least the cell count");
  if (psi.dims() != r.dims()) throw std::invalid_argument("expand_adapted: dims mismatch");
  CountingAllocation alloc = counting_allocation(psi, r, n);

  for (std::size_t i = 0; i < r.size(); ++i) {
    const CellAllocation& c = alloc.cells[i];
    if (!c.occupied) continue;
    const std::size_t needed = c.m + (c.remainder2 > 0.0 ? 1 : 0);
    if (r[i].rank() < needed)
      throw std::invalid_argument("projector rank too small for requested n");
  }

  std::vector<StateVector> micro;
  micro.reserve(n);
  std::vector<int> cell_of;
  cell_of.reserve(n);
  std::vector<StateVector> remainders;
  std::vector<double> rem_norms;

  for (std::size_t i = 0; i < r.size(); ++i) {
    const CellAllocation& c = alloc.cells[i];
    if (!c.occupied) continue;
    const bool has_rem = c.remainder2 > 0.0;
    const std::size_t frame_size = c.m + (has_rem ? 1 : 0);
    if (frame_size == 0) continue;
    const double alpha = std::sqrt(c.norm2);
    StateVector phi = r[i].apply(psi);
    phi *= cdouble{1.0 / alpha, 0.0};
    std::vector<StateVector> frame = detail::range_frame(r[i], phi, frame_size);
    std::vector<double> targets(frame_size, c.m > 0 ? std::sqrt((c.norm2 - c.remainder2) /
                                                               static_cast<double>(c.m))
                                                    : 0.0);
    if (has_rem) targets[frame_size - 1] = std::sqrt(c.remainder2);
    std::vector<StateVector> parts = detail::split_in_frame(frame, targets);
    for (std::size_t j = 0; j < c.m; ++j) {
      micro.push_back(std::move(parts[j]));
      cell_of.push_back(static_cast<int>(i));
    }
    if (has_rem) {
      rem_norms.push_back(parts[frame_size - 1].norm());
      remainders.push_back(std::move(parts[frame_size - 1]));
    }
  }

  if (alloc.cats > 0) {
    // The remainders live in mutually orthogonal cell ranges, so their
    // normalized forms are an orthonormal frame for the cat construction.
    const std::size_t q = remainders.size();
    if (q < alloc.cats)
      throw std::runtime_error("expand_adapted: not enough remainder directions for cats");
    double s2 = 0.0;
    for (double d : rem_norms) s2 += d * d;
    const double s = std::sqrt(s2);
    std::vector<StateVector> rem_hat;
    rem_hat.reserve(q);
    for (std::size_t l = 0; l < q; ++l) {
      StateVector v = remainders[l];
      v *= cdouble{1.0 / rem_norms[l], 0.0};
      rem_hat.push_back(std::move(v));
    }
    // Frame with g_0 = (sum of remainders)/s, built by the same rank-1 trick
    // in remainder coordinates (beta_l = rem_norms[l]/s, all real).
    std::vector<StateVector> g;
    g.reserve(alloc.cats);
    StateVector g0 = StateVector::zero(psi.dims());
    for (std::size_t l = 0; l < q; ++l) g0.add_scaled(rem_hat[l], cdouble{rem_norms[l] / s, 0.0});
    const double beta0 = rem_norms[0] / s;
    const double denom = 2.0 * (1.0 + beta0);
    StateVector w = g0;
    w.add_scaled(rem_hat[0], cdouble{1.0, 0.0});
    g.push_back(std::move(g0));
    for (std::size_t j = 1; j < alloc.cats; ++j) {
      StateVector f = rem_hat[j];
      f *= cdouble{-1.0, 0.0};
      f.add_scaled(w, cdouble{2.0 * (rem_norms[j] / s) / denom, 0.0});
      g.push_back(std::move(f));
    }
    std::vector<double> targets(alloc.cats, s / std::sqrt(static_cast<double>(alloc.cats)));
    std::vector<StateVector> cats = detail::split_in_frame(g, targets);
    for (StateVector& cat : cats) {
      micro.push_back(std::move(cat));
      cell_of.push_back(-1);
    }
  } else if (!remainders.empty()) {
    throw std::runtime_error("expand_adapted: stray remainder with zero cat count");
  }

  if (micro.size() != n) throw std::runtime_error("expand_adapted: microstate count mismatch");

  AdaptedInfo info;
  info.cell_count = r.size();
  info.m.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) info.m[i] = alloc.cells[i].m;
  info.cats = alloc.cats;
  info.cell_of = std::move(cell_of);
  return EquiampExpansion(psi, std::move(micro), std::move(info));
}

// EE1: a seeded member of the continuous family of equiamplitude expansions.
// Distinct seeds give distinct expansions; the same seed reproduces bits.
inline EquiampExpansion expand_generic(const StateVector& psi, std::size_t n,
                                       std::uint64_t seed) {
  const double psi2 = psi.norm2();
  if (!(psi2 > 0.0)) throw std::invalid_argument("degenerate state");
  if (n < 1) throw std::invalid_argument("expand_generic: n must be positive");
  if (n > psi.size()) throw std::invalid_argument("insufficient dimension");
  const double pn = std::sqrt(psi2);
  StateVector psi_hat = psi;
  psi_hat *= cdouble{1.0 / pn, 0.0};
  std::vector<StateVector> frame;
  frame.reserve(n);
  frame.push_back(std::move(psi_hat));
  rng::Stream st(rng::mix(seed, 0x9c0ffeeull));
  while (frame.size() < n) {
    StateVector v = random_state(psi.dims(), st);
    for (int pass = 0; pass < 2; ++pass)
      for (const StateVector& f : frame) v.add_scaled(f, -inner(f, v));
    const double vn = v.norm();
    if (vn < 1e-8) continue;
    v *= cdouble{1.0 / vn, 0.0};
    frame.push_back(std::move(v));
  }
  std::vector<double> targets(n, pn / std::sqrt(static_cast<double>(n)));
  return EquiampExpansion(psi, detail::split_in_frame(frame, targets));
}

inline std::vector<MicrostateClass> classify_each(const EquiampExpansion& e, const Projector& p) {
  std::vector<MicrostateClass> out;
  out.reserve(e.n());
  for (const StateVector& xi : e.microstates()) {
    const double xin = xi.norm();
    StateVector pxi = p.apply(xi);
    const double pn = pxi.norm();
    pxi -= xi;
    if (pxi.norm() <= tau_cls * xin)
      out.push_back(MicrostateClass::Eig1);
    else if (pn <= tau_cls * xin)
      out.push_back(MicrostateClass::Eig0);
    else
      out.push_back(MicrostateClass::Cat);
  }
  return out;
}

inline ClassCounts classify(const EquiampExpansion& e, const Projector& p) {
  ClassCounts c;
  for (MicrostateClass k : classify_each(e, p)) {
    if (k == MicrostateClass::Eig1)
      ++c.eig1;
    else if (k == MicrostateClass::Eig0)
      ++c.eig0;
    else
      ++c.cat;
  }
  return c;
}

// [n1/n, (n1+nc)/n]; contains the Born value for any expansion of psi.
inline ImpreciseProbability imprecise_probability(const EquiampExpansion& e, const Projector& p) {
  const ClassCounts c = classify(e, p);
  const double n = static_cast<double>(e.n());
  return {static_cast<double>(c.eig1) / n, static_cast<double>(c.eig1 + c.cat) / n};
}

struct CountingDistribution {
  bool adapted = false;
  std::size_t n = 0;
  std::vector<std::size_t> m;
  std::size_t cats = 0;
  std::vector<double> p;                       // m_i / n
  std::vector<ImpreciseProbability> bounds;    // per-cell bounds, always valid

  double cat_mass() const { return static_cast<double>(cats) / static_cast<double>(n); }
};

inline CountingDistribution counting_distribution(const EquiampExpansion& e, const Resolution& r) {
  CountingDistribution d;
  d.n = e.n();
  d.m.assign(r.size(), 0);
  d.p.assign(r.size(), 0.0);
  d.bounds.resize(r.size());
  std::vector<bool> claimed(e.n(), false);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const std::vector<MicrostateClass> cls = classify_each(e, r[i]);
    std::size_t n1 = 0, nc = 0;
    for (std::size_t j = 0; j < cls.size(); ++j) {
      if (cls[j] == MicrostateClass::Eig1) {
        ++n1;
        claimed[j] = true;
      } else if (cls[j] == MicrostateClass::Cat) {
        ++nc;
      }
    }
    d.m[i] = n1;
    d.p[i] = static_cast<double>(n1) / static_cast<double>(d.n);
    d.bounds[i] = {static_cast<double>(n1) / static_cast<double>(d.n),
                   static_cast<double>(n1 + nc) / static_cast<double>(d.n)};
  }
  std::size_t owned = 0;
  for (bool b : claimed) owned += b ? 1 : 0;
  d.cats = d.n - owned;
  d.adapted = d.cats <= r.size() - 1;
  return d;
}

}  // namespace qmlab
