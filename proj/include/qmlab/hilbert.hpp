#pragma once

// Finite-dimensional complex Hilbert-space primitives: state vectors over a
// tensor factorization, projectors given by orthonormal range bases,
// orthogonal resolutions of the identity, dense unitaries, and the Born rule.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmlab/rng.hpp"

namespace qmlab {

using cdouble = std::complex<double>;

// Default tolerances (all relative to operand norms).
inline constexpr double tau_orth = 1e-10;  // orthonormality / idempotence
inline constexpr double tau_geo = 1e-12;   // unit directions
inline constexpr double tau_exp = 1e-9;    // expansion validity
inline constexpr double tau_cls = 1e-8;    // microstate classification
inline constexpr double eps_cond = 1e-12;  // conditioning guard

// Role tag for each tensor factor. The EPRB convention is the fixed order
// (SpinA, SpaceA, SpinB, SpaceB).
enum class FactorRole { Generic, SpinA, SpaceA, SpinB, SpaceB };

inline std::size_t dims_product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) p *= d;
  return p;
}

class StateVector {
 public:
  StateVector() = default;

  StateVector(std::vector<std::size_t> dims, std::vector<cdouble> amplitudes,
              std::vector<FactorRole> roles = {})
      : dims_(std::move(dims)), roles_(std::move(roles)), amp_(std::move(amplitudes)) {
    for (std::size_t d : dims_)
      if (d == 0) throw std::invalid_argument("StateVector: zero factor dimension");
    if (amp_.size() != dims_product(dims_))
      throw std::invalid_argument("StateVector: amplitude count does not match dims product");
    if (roles_.empty()) roles_.assign(dims_.size(), FactorRole::Generic);
    if (roles_.size() != dims_.size())
      throw std::invalid_argument("StateVector: role count does not match factor count");
  }

  static StateVector zero(std::vector<std::size_t> dims) {
    std::vector<cdouble> a(dims_product(dims), cdouble{0.0, 0.0});
    return StateVector(std::move(dims), std::move(a));
  }

  static StateVector basis_state(std::vector<std::size_t> dims, std::size_t index) {
    StateVector v = zero(std::move(dims));
    if (index >= v.size()) throw std::invalid_argument("basis_state: index out of range");
    v.amp_[index] = cdouble{1.0, 0.0};
    return v;
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<FactorRole>& roles() const { return roles_; }
  void set_roles(std::vector<FactorRole> roles) {
    if (roles.size() != dims_.size())
      throw std::invalid_argument("set_roles: role count does not match factor count");
    roles_ = std::move(roles);
  }

  std::size_t size() const { return amp_.size(); }
  std::size_t factor_count() const { return dims_.size(); }

  const std::vector<cdouble>& amplitudes() const { return amp_; }
  cdouble operator[](std::size_t i) const { return amp_[i]; }
  cdouble& at(std::size_t i) { return amp_[i]; }

  double norm2() const {
    double s = 0.0;
    for (const cdouble& a : amp_) s += std::norm(a);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  StateVector& operator+=(const StateVector& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] += o.amp_[i];
    return *this;
  }
  StateVector& operator-=(const StateVector& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] -= o.amp_[i];
    return *this;
  }
  StateVector& operator*=(cdouble c) {
    for (cdouble& a : amp_) a *= c;
    return *this;
  }

  // this += c * o, the workhorse of every construction below.
  void add_scaled(const StateVector& o, cdouble c) {
    check_same_shape(o);
    for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] += c * o.amp_[i];
  }

  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
  friend StateVector operator*(cdouble c, StateVector a) { return a *= c; }
  friend StateVector operator*(StateVector a, cdouble c) { return a *= c; }

  StateVector normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw std::invalid_argument("degenerate state");
    StateVector v = *this;
    v *= cdouble{1.0 / n, 0.0};
    return v;
  }

 private:
  void check_same_shape(const StateVector& o) const {
    if (dims_ != o.dims_) throw std::invalid_argument("StateVector: factor dims mismatch");
  }

  std::vector<std::size_t> dims_;
  std::vector<FactorRole> roles_;
  std::vector<cdouble> amp_;
};

// <u, v> with the physics convention: antilinear in the first slot.
inline cdouble inner(const StateVector& u, const StateVector& v) {
  if (u.dims() != v.dims()) throw std::invalid_argument("inner: factor dims mismatch");
  cdouble s{0.0, 0.0};
  const auto& a = u.amplitudes();
  const auto& b = v.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Kronecker product, u's indices major (the last factor of v varies fastest).
inline StateVector tensor(const StateVector& u, const StateVector& v) {
  std::vector<std::size_t> dims = u.dims();
  dims.insert(dims.end(), v.dims().begin(), v.dims().end());
  std::vector<FactorRole> roles = u.roles();
  roles.insert(roles.end(), v.roles().begin(), v.roles().end());
  std::vector<cdouble> amp(u.size() * v.size());
  const auto& a = u.amplitudes();
  const auto& b = v.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cdouble ai = a[i];
    cdouble* out = amp.data() + i * b.size();
    for (std::size_t j = 0; j < b.size(); ++j) out[j] = ai * b[j];
  }
  return StateVector(std::move(dims), std::move(amp), std::move(roles));
}

// A unit 3-vector; constructor rejects non-unit input within tau_geo.
struct Direction {
  double x = 0.0, y = 0.0, z = 1.0;

  Direction() = default;
  Direction(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (std::abs(n - 1.0) > tau_geo)
      throw std::invalid_argument("Direction: not a unit vector");
  }

  static Direction unit(double x_, double y_, double z_) {
    const double n = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
    if (!(n > 0.0)) throw std::invalid_argument("Direction: zero vector");
    return Direction(x_ / n, y_ / n, z_ / n);
  }

  // (sin t, 0, cos t): the coplanar family used for angle sweeps and CHSH.
  static Direction polar_xz(double theta) {
    return Direction(std::sin(theta), 0.0, std::cos(theta));
  }

  double dot(const Direction& o) const { return x * o.x + y * o.y + z * o.z; }
};

// Orthogonal projector, stored by an orthonormal basis of its range.
//
// Two storage forms share one contract:
//  - dense: explicit basis StateVectors on the ambient space;
//  - factored: small per-factor bases on selected slots, identity elsewhere
//    (covers P (x) I lifts and joint outcome cells without materializing
//    rank x dim storage). basis_vector(i) materializes the i-th element of
//    the ordered orthonormal range basis in either form.
class Projector {
 public:
  struct Block {
    std::size_t slot;
    std::vector<std::vector<cdouble>> basis;  // orthonormal vectors on that factor
  };

  static Projector from_basis(std::vector<std::size_t> dims, std::vector<StateVector> basis) {
    Projector p;
    p.dims_ = std::move(dims);
    p.space_dim_ = dims_product(p.dims_);
    p.basis_ = std::move(basis);
    p.factored_ = false;
    p.rank_ = p.basis_.size();
    for (const auto& b : p.basis_) {
      if (b.dims() != p.dims_) throw std::invalid_argument("Projector: basis dims mismatch");
    }
    p.check_orthonormal_dense();
    return p;
  }

  static Projector from_blocks(std::vector<std::size_t> dims, std::vector<Block> blocks) {
    Projector p;
    p.dims_ = std::move(dims);
    p.space_dim_ = dims_product(p.dims_);
    p.factored_ = true;
    std::sort(blocks.begin(), blocks.end(),
              [](const Block& a, const Block& b) { return a.slot < b.slot; });
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const Block& blk = blocks[i];
      if (blk.slot >= p.dims_.size())
        throw std::invalid_argument("Projector: block slot out of range");
      if (i > 0 && blocks[i - 1].slot == blk.slot)
        throw std::invalid_argument("Projector: duplicate block slot");
      for (const auto& v : blk.basis)
        if (v.size() != p.dims_[blk.slot])
          throw std::invalid_argument("Projector: block basis dimension mismatch");
      check_orthonormal_small(blk.basis);
    }
    p.blocks_ = std::move(blocks);
    p.rank_ = 1;
    std::size_t bi = 0;
    for (std::size_t s = 0; s < p.dims_.size(); ++s) {
      if (bi < p.blocks_.size() && p.blocks_[bi].slot == s) {
        p.rank_ *= p.blocks_[bi].basis.size();
        ++bi;
      } else {
        p.rank_ *= p.dims_[s];
      }
    }
    return p;
  }

  static Projector identity(std::vector<std::size_t> dims) {
    return from_blocks(std::move(dims), {});
  }

  // Rank-1 projector onto the ray of v.
  static Projector onto(const StateVector& v) {
    return from_basis(v.dims(), {v.normalized()});
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t space_dim() const { return space_dim_; }
  std::size_t rank() const { return rank_; }
  bool factored() const { return factored_; }
  bool is_identity() const { return factored_ && blocks_.empty(); }

  StateVector apply(const StateVector& x) const {
    if (x.dims() != dims_) throw std::invalid_argument("Projector: state dims mismatch");
    if (factored_) {
      StateVector out = x;
      for (const Block& blk : blocks_) project_slot(out, blk);
      return out;
    }
    StateVector out = StateVector::zero(dims_);
    for (const StateVector& b : basis_) out.add_scaled(b, inner(b, x));
    return out;
  }

  // ||P x||^2 without materializing P x in the dense form.
  double range_norm2(const StateVector& x) const {
    if (x.dims() != dims_) throw std::invalid_argument("Projector: state dims mismatch");
    if (factored_) return apply(x).norm2();
    double s = 0.0;
    for (const StateVector& b : basis_) s += std::norm(inner(b, x));
    return s;
  }

  // i-th element of the ordered orthonormal range basis.
  StateVector basis_vector(std::size_t i) const {
    if (i >= rank_) throw std::invalid_argument("Projector: basis index out of range");
    if (!factored_) return basis_[i];
    // Mixed-radix decomposition of i over per-slot range dimensions, then a
    // progressive Kronecker product.
    const std::size_t nf = dims_.size();
    std::vector<std::size_t> radix(nf);
    std::vector<const std::vector<std::vector<cdouble>>*> block_of(nf, nullptr);
    {
      std::size_t bi = 0;
      for (std::size_t s = 0; s < nf; ++s) {
        if (bi < blocks_.size() && blocks_[bi].slot == s) {
          radix[s] = blocks_[bi].basis.size();
          block_of[s] = &blocks_[bi].basis;
          ++bi;
        } else {
          radix[s] = dims_[s];
        }
      }
    }
    std::vector<std::size_t> digit(nf);
    {
      std::size_t rem = i;
      for (std::size_t s = nf; s-- > 0;) {
        digit[s] = rem % radix[s];
        rem /= radix[s];
      }
    }
    std::vector<cdouble> acc{cdouble{1.0, 0.0}};
    for (std::size_t s = 0; s < nf; ++s) {
      const std::size_t d = dims_[s];
      std::vector<cdouble> next(acc.size() * d, cdouble{0.0, 0.0});
      if (block_of[s]) {
        const auto& v = (*block_of[s])[digit[s]];
        for (std::size_t a = 0; a < acc.size(); ++a)
          for (std::size_t j = 0; j < d; ++j) next[a * d + j] = acc[a] * v[j];
      } else {
        for (std::size_t a = 0; a < acc.size(); ++a) next[a * d + digit[s]] = acc[a];
      }
      acc = std::move(next);
    }
    return StateVector(dims_, std::move(acc));
  }

 private:
  void check_orthonormal_dense() const {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      for (std::size_t j = i; j < basis_.size(); ++j) {
        const cdouble g = inner(basis_[i], basis_[j]);
        const double want = (i == j) ? 1.0 : 0.0;
        if (std::abs(g - want) > tau_orth)
          throw std::invalid_argument("Projector: range basis is not orthonormal");
      }
    }
  }

  static void check_orthonormal_small(const std::vector<std::vector<cdouble>>& basis) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i; j < basis.size(); ++j) {
        cdouble g{0.0, 0.0};
        for (std::size_t k = 0; k < basis[i].size(); ++k)
          g += std::conj(basis[i][k]) * basis[j][k];
        const double want = (i == j) ? 1.0 : 0.0;
        if (std::abs(g - want) > tau_orth)
          throw std::invalid_argument("Projector: block basis is not orthonormal");
      }
    }
  }

  // In-place orthogonal projection of one tensor slot onto span(blk.basis).
  void project_slot(StateVector& x, const Block& blk) const {
    const std::size_t d = dims_[blk.slot];
    std::size_t post = 1;
    for (std::size_t s = blk.slot + 1; s < dims_.size(); ++s) post *= dims_[s];
    const std::size_t pre = space_dim_ / (d * post);
    const std::size_t k = blk.basis.size();
    std::vector<cdouble> coeff(k);
    std::vector<cdouble> fiber(d);
    for (std::size_t p = 0; p < pre; ++p) {
      for (std::size_t q = 0; q < post; ++q) {
        const std::size_t base = p * d * post + q;
        for (std::size_t xg = 0; xg < d; ++xg) fiber[xg] = x.at(base + xg * post);
        for (std::size_t m = 0; m < k; ++m) {
          cdouble c{0.0, 0.0};
          for (std::size_t xg = 0; xg < d; ++xg) c += std::conj(blk.basis[m][xg]) * fiber[xg];
          coeff[m] = c;
        }
        for (std::size_t xg = 0; xg < d; ++xg) {
          cdouble v{0.0, 0.0};
          for (std::size_t m = 0; m < k; ++m) v += coeff[m] * blk.basis[m][xg];
          x.at(base + xg * post) = v;
        }
      }
    }
  }

  std::vector<std::size_t> dims_;
  std::size_t space_dim_ = 0;
  std::size_t rank_ = 0;
  bool factored_ = false;
  std::vector<StateVector> basis_;
  std::vector<Block> blocks_;
};

// Born rule: ||P psi||^2 / ||psi||^2.
inline double born(const StateVector& psi, const Projector& p) {
  const double n2 = psi.norm2();
  if (!(n2 > 0.0)) throw std::invalid_argument("degenerate state");
  const double v = p.range_norm2(psi) / n2;
  return std::clamp(v, 0.0, 1.0);
}

// Spin projector (I + s a.sigma)/2 on a 2-dim factor, realized by its
// rank-1 eigenbasis. Half-angle form avoids cancellation at the poles.
inline Projector spin_projector(const Direction& a, int s) {
  if (s != +1 && s != -1) throw std::invalid_argument("spin_projector: outcome must be +1 or -1");
  const double n = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
  if (std::abs(n - 1.0) > tau_geo)
    throw std::invalid_argument("spin_projector: direction is not a unit vector");
  const double c = std::sqrt(std::max(0.0, (1.0 + a.z) / 2.0));  // cos(theta/2)
  const double sn = std::sqrt(std::max(0.0, (1.0 - a.z) / 2.0));  // sin(theta/2)
  const double rho = std::hypot(a.x, a.y);
  const cdouble phase = rho > 0.0 ? cdouble{a.x / rho, a.y / rho} : cdouble{1.0, 0.0};
  std::vector<cdouble> v(2);
  if (s == +1) {
    v[0] = cdouble{c, 0.0};
    v[1] = phase * sn;
  } else {
    v[0] = -std::conj(phase) * sn;
    v[1] = cdouble{c, 0.0};
  }
  return Projector::from_basis({2}, {StateVector({2}, std::move(v))});
}

// P (x) I: embed a single-factor projector at `slot` of an ambient factorization.
inline Projector lift(const Projector& p, std::size_t slot, std::vector<std::size_t> dims) {
  if (p.dims().size() != 1)
    throw std::invalid_argument("lift: projector must live on a single factor");
  if (slot >= dims.size()) throw std::invalid_argument("lift: slot out of range");
  if (dims[slot] != p.dims()[0])
    throw std::invalid_argument("lift: factor dimension mismatch");
  if (p.rank() == p.space_dim()) return Projector::identity(std::move(dims));
  std::vector<std::vector<cdouble>> small;
  small.reserve(p.rank());
  for (std::size_t i = 0; i < p.rank(); ++i) small.push_back(p.basis_vector(i).amplitudes());
  return Projector::from_blocks(std::move(dims), {{slot, std::move(small)}});
}

// Orthogonal family of projectors summing to the identity.
class Resolution {
 public:
  explicit Resolution(std::vector<Projector> members, bool validate = true)
      : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("Resolution: empty family");
    const auto& dims = members_.front().dims();
    std::size_t total_rank = 0;
    for (const Projector& p : members_) {
      if (p.dims() != dims) throw std::invalid_argument("Resolution: member dims mismatch");
      total_rank += p.rank();
    }
    if (total_rank != members_.front().space_dim())
      throw std::invalid_argument("Resolution: ranks do not sum to the ambient dimension");
    if (validate) check_probes();
  }

  std::size_t size() const { return members_.size(); }
  const Projector& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<std::size_t>& dims() const { return members_.front().dims(); }
  std::size_t space_dim() const { return members_.front().space_dim(); }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  // Pairwise annihilation and completeness on seeded random probes.
  void check_probes() const {
    rng::Stream st(0x5e501u);
    const std::size_t dim = space_dim();
    for (int probe = 0; probe < 4; ++probe) {
      std::vector<cdouble> raw(dim);
      for (cdouble& a : raw) a = st.next_complex_gaussian();
      StateVector x(dims(), std::move(raw));
      const double xn = x.norm();
      StateVector sum = StateVector::zero(dims());
      std::vector<StateVector> images;
      images.reserve(members_.size());
      for (const Projector& p : members_) {
        images.push_back(p.apply(x));
        sum += images.back();
      }
      sum -= x;
      if (sum.norm() > 64 * tau_orth * xn)
        throw std::invalid_argument("Resolution: members do not sum to the identity");
      for (std::size_t i = 0; i < members_.size(); ++i)
        for (std::size_t j = 0; j < members_.size(); ++j)
          if (i != j && members_[i].apply(images[j]).norm() > 64 * tau_orth * xn)
            throw std::invalid_argument("Resolution: members are not pairwise orthogonal");
    }
  }

  std::vector<Projector> members_;
};

// Dense unitary, row-major.
class Unitary {
 public:
  Unitary(std::size_t dim, std::vector<cdouble> entries, bool validate = true)
      : dim_(dim), a_(std::move(entries)) {
    if (a_.size() != dim_ * dim_) throw std::invalid_argument("Unitary: entry count mismatch");
    if (validate) check_probes();
  }

  static Unitary identity(std::size_t dim) {
    std::vector<cdouble> a(dim * dim, cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) a[i * dim + i] = cdouble{1.0, 0.0};
    return Unitary(dim, std::move(a), false);
  }

  std::size_t dim() const { return dim_; }
  cdouble entry(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }

  std::vector<cdouble> apply(const std::vector<cdouble>& x) const {
    if (x.size() != dim_) throw std::invalid_argument("Unitary: vector dimension mismatch");
    std::vector<cdouble> y(dim_, cdouble{0.0, 0.0});
    for (std::size_t r = 0; r < dim_; ++r) {
      cdouble s{0.0, 0.0};
      const cdouble* row = a_.data() + r * dim_;
      for (std::size_t c = 0; c < dim_; ++c) s += row[c] * x[c];
      y[r] = s;
    }
    return y;
  }

  std::vector<cdouble> apply_adjoint(const std::vector<cdouble>& x) const {
    if (x.size() != dim_) throw std::invalid_argument("Unitary: vector dimension mismatch");
    std::vector<cdouble> y(dim_, cdouble{0.0, 0.0});
    for (std::size_t r = 0; r < dim_; ++r) {
      const cdouble xr = x[r];
      const cdouble* row = a_.data() + r * dim_;
      for (std::size_t c = 0; c < dim_; ++c) y[c] += std::conj(row[c]) * xr;
    }
    return y;
  }

  // max_x ||U*U x - x|| / ||x|| over probes; the unitarity figure of merit.
  double unitarity_residual(std::size_t probes = 8, std::uint64_t seed = 0xab1u) const {
    rng::Stream st(seed);
    double worst = 0.0;
    for (std::size_t k = 0; k < probes; ++k) {
      std::vector<cdouble> x(dim_);
      for (cdouble& v : x) v = st.next_complex_gaussian();
      double xn2 = 0.0;
      for (const cdouble& v : x) xn2 += std::norm(v);
      const std::vector<cdouble> y = apply_adjoint(apply(x));
      double d2 = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) d2 += std::norm(y[i] - x[i]);
      worst = std::max(worst, std::sqrt(d2 / xn2));
    }
    return worst;
  }

 private:
  void check_probes() const {
    if (unitarity_residual() > tau_orth)
      throw std::invalid_argument("Unitary: conjugate transpose times itself is not the identity");
  }

  std::size_t dim_;
  std::vector<cdouble> a_;
};

inline StateVector apply_unitary(const Unitary& u, const StateVector& psi) {
  if (psi.size() != u.dim()) throw std::invalid_argument("apply_unitary: dimension mismatch");
  return StateVector(psi.dims(), u.apply(psi.amplitudes()), psi.roles());
}

}  // namespace qmlab
