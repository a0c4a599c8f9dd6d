#pragma once

// Seeded random states, orthonormal sets, unitaries, resolutions, directions.
// Shared by the property tests, the acceptance suite, and the CLI.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qmlab/hilbert.hpp"
#include "qmlab/rng.hpp"

namespace qmlab {

inline StateVector random_state(const std::vector<std::size_t>& dims, rng::Stream& st) {
  std::vector<cdouble> a(dims_product(dims));
  for (cdouble& v : a) v = st.next_complex_gaussian();
  return StateVector(dims, std::move(a));
}

inline StateVector random_unit_state(const std::vector<std::size_t>& dims, rng::Stream& st) {
  return random_state(dims, st).normalized();
}

// Modified Gram-Schmidt with a second orthogonalization pass. Retries a fresh
// random draw on (astronomically unlikely) rank deficiency.
inline std::vector<StateVector> random_orthonormal_set(const std::vector<std::size_t>& dims,
                                                       std::size_t count, rng::Stream& st) {
  const std::size_t dim = dims_product(dims);
  if (count > dim)
    throw std::invalid_argument("random_orthonormal_set: count exceeds dimension");
  std::vector<StateVector> out;
  out.reserve(count);
  while (out.size() < count) {
    StateVector v = random_state(dims, st);
    for (int pass = 0; pass < 2; ++pass)
      for (const StateVector& b : out) v.add_scaled(b, -inner(b, v));
    const double n = v.norm();
    if (n < 1e-8) continue;
    v *= cdouble{1.0 / n, 0.0};
    out.push_back(std::move(v));
  }
  return out;
}

inline Projector random_projector(const std::vector<std::size_t>& dims, std::size_t rank,
                                  rng::Stream& st) {
  return Projector::from_basis(dims, random_orthonormal_set(dims, rank, st));
}

// Orthogonal family with the given ranks (which must sum to the dimension).
inline Resolution random_resolution(const std::vector<std::size_t>& dims,
                                    const std::vector<std::size_t>& ranks, rng::Stream& st) {
  std::size_t total = 0;
  for (std::size_t r : ranks) total += r;
  if (total != dims_product(dims))
    throw std::invalid_argument("random_resolution: ranks do not sum to the dimension");
  std::vector<StateVector> frame = random_orthonormal_set(dims, total, st);
  std::vector<Projector> cells;
  cells.reserve(ranks.size());
  std::size_t offset = 0;
  for (std::size_t r : ranks) {
    std::vector<StateVector> part(frame.begin() + offset, frame.begin() + offset + r);
    cells.push_back(Projector::from_basis(dims, std::move(part)));
    offset += r;
  }
  return Resolution(std::move(cells));
}

// Haar-ish random unitary from an orthonormalized Gaussian frame.
inline Unitary random_unitary(std::size_t dim, rng::Stream& st) {
  std::vector<StateVector> cols = random_orthonormal_set({dim}, dim, st);
  std::vector<cdouble> a(dim * dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) a[r * dim + c] = cols[c][r];
  return Unitary(dim, std::move(a));
}

inline Direction random_direction(rng::Stream& st) {
  for (;;) {
    const double x = st.next_gaussian();
    const double y = st.next_gaussian();
    const double z = st.next_gaussian();
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n > 1e-6) return Direction(x / n, y / n, z / n);
  }
}

}  // namespace qmlab
