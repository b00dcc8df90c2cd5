// Copyright 2026 The rareqec Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rareqec/binary_matrix.hpp"
#include "rareqec/fault_system.hpp"

namespace rareqec {

// Basis of ker(kernel_of) modulo the row space of quotient_by, one row per
// coset representative.
inline BinaryMatrix quotient_kernel_basis(const BinaryMatrix& kernel_of,
                                          const BinaryMatrix& quotient_by) {
  RowBasis rb(quotient_by.num_cols());
  for (std::size_t i = 0; i < quotient_by.num_rows(); ++i) rb.add(quotient_by.row(i));
  BinaryMatrix out(0, kernel_of.num_cols());
  for (auto& v : kernel_of.kernel_basis())
    if (rb.add(v)) out.append_row(std::move(v));
  return out;
}

// Bit-flip error model of a CSS stabilizer pair: qubit flips are detected by
// the stab_z checks, and a residual flip pattern is harmless exactly when it
// lies in the row space of stab_x.  Action rows span ker(stab_x) modulo the
// row space of stab_z.
inline FaultSystem css_bitflip_system(const BinaryMatrix& stab_x,
                                      const BinaryMatrix& stab_z) {
  if (stab_x.num_cols() != stab_z.num_cols())
    throw std::invalid_argument("stabilizer qubit counts differ");
  BinaryMatrix actions = quotient_kernel_basis(stab_x, stab_z);
  return FaultSystem::from_matrices(stab_z, actions);
}

namespace detail {
inline std::size_t torus_wrap(std::int64_t v, std::int64_t n) {
  return static_cast<std::size_t>(((v % n) + n) % n);
}
}  // namespace detail

// Toric code on a d1 x d2 square lattice with qubits on edges.  Qubit layout:
// x-directed edge at (x, y) has index (x*d2 + y), y-directed edge at (x, y)
// has index d1*d2 + (x*d2 + y).
struct ToricLattice {
  std::int64_t d1, d2;
  std::size_t num_qubits() const { return static_cast<std::size_t>(2 * d1 * d2); }
  std::size_t xedge(std::int64_t x, std::int64_t y) const {
    return detail::torus_wrap(x, d1) * static_cast<std::size_t>(d2) +
           detail::torus_wrap(y, d2);
  }
  std::size_t yedge(std::int64_t x, std::int64_t y) const {
    return static_cast<std::size_t>(d1 * d2) + xedge(x, y);
  }

  // One star per vertex.
  BinaryMatrix star_matrix() const {
    BinaryMatrix s(static_cast<std::size_t>(d1 * d2), num_qubits());
    std::size_t r = 0;
    for (std::int64_t x = 0; x < d1; ++x)
      for (std::int64_t y = 0; y < d2; ++y, ++r) {
        s.set(r, xedge(x, y));
        s.set(r, xedge(x - 1, y));
        s.set(r, yedge(x, y));
        s.set(r, yedge(x, y - 1));
      }
    return s;
  }

  // One plaquette per face.
  BinaryMatrix plaquette_matrix() const {
    BinaryMatrix p(static_cast<std::size_t>(d1 * d2), num_qubits());
    std::size_t r = 0;
    for (std::int64_t x = 0; x < d1; ++x)
      for (std::int64_t y = 0; y < d2; ++y, ++r) {
        p.set(r, xedge(x, y));
        p.set(r, xedge(x, y + 1));
        p.set(r, yedge(x, y));
        p.set(r, yedge(x + 1, y));
      }
    return p;
  }
};

inline FaultSystem toric_bitflip_system(std::int64_t d1, std::int64_t d2) {
  if (d1 < 2 || d2 < 2) throw std::invalid_argument("toric lattice needs d >= 2");
  ToricLattice lat{d1, d2};
  return css_bitflip_system(lat.star_matrix(), lat.plaquette_matrix());
}
inline FaultSystem toric_bitflip_system(std::int64_t d) {
  return toric_bitflip_system(d, d);
}

// Rotated toric code, d even: one qubit per site of a d x d torus, with
// check plaquettes on the two colors of the face checkerboard.  Qubit (x, y)
// has index x*d + y.
inline FaultSystem rotated_toric_bitflip_system(std::int64_t d) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("rotated torus needs even d >= 2");
  const auto q = [d](std::int64_t x, std::int64_t y) {
    return detail::torus_wrap(x, d) * static_cast<std::size_t>(d) +
           detail::torus_wrap(y, d);
  };
  const std::size_t faces_per_color = static_cast<std::size_t>(d * d / 2);
  BinaryMatrix stab_x(faces_per_color, static_cast<std::size_t>(d * d));
  BinaryMatrix stab_z(faces_per_color, static_cast<std::size_t>(d * d));
  std::size_t rx = 0, rz = 0;
  for (std::int64_t x = 0; x < d; ++x)
    for (std::int64_t y = 0; y < d; ++y) {
      BinaryMatrix& target = ((x + y) % 2 == 0) ? stab_x : stab_z;
      std::size_t& r = ((x + y) % 2 == 0) ? rx : rz;
      target.set(r, q(x, y));
      target.set(r, q(x + 1, y));
      target.set(r, q(x, y + 1));
      target.set(r, q(x + 1, y + 1));
      ++r;
    }
  return css_bitflip_system(stab_x, stab_z);
}

// Bivariate bicycle code over Z_l x Z_m: check polynomials are sums of
// monomials x^a y^b acting by cyclic shift on the l*m group indices.
struct BicycleMonomial {
  std::int64_t x_pow = 0;
  std::int64_t y_pow = 0;
};

inline BinaryMatrix bicycle_polynomial_matrix(std::int64_t l, std::int64_t m,
                                              std::span<const BicycleMonomial> terms) {
  const std::size_t n = static_cast<std::size_t>(l * m);
  BinaryMatrix out(n, n);
  for (std::int64_t u = 0; u < l; ++u)
    for (std::int64_t v = 0; v < m; ++v) {
      const std::size_t row = static_cast<std::size_t>(u * m + v);
      for (const auto& t : terms) {
        const std::size_t col =
            detail::torus_wrap(u + t.x_pow, l) * static_cast<std::size_t>(m) +
            detail::torus_wrap(v + t.y_pow, m);
        out.flip(row, col);
      }
    }
  return out;
}

struct BicycleCode {
  std::int64_t l, m;
  std::vector<BicycleMonomial> a_terms, b_terms;

  std::size_t num_qubits() const { return static_cast<std::size_t>(2 * l * m); }

  // stab_x = [A | B], stab_z = [B^T | A^T].
  BinaryMatrix stab_x() const {
    const std::size_t lm = static_cast<std::size_t>(l * m);
    BinaryMatrix a = bicycle_polynomial_matrix(l, m, a_terms);
    BinaryMatrix b = bicycle_polynomial_matrix(l, m, b_terms);
    BinaryMatrix s(lm, 2 * lm);
    for (std::size_t i = 0; i < lm; ++i) {
      a.row(i).for_each_set([&](std::size_t j) { s.set(i, j); });
      b.row(i).for_each_set([&](std::size_t j) { s.set(i, lm + j); });
    }
    return s;
  }
  BinaryMatrix stab_z() const {
    const std::size_t lm = static_cast<std::size_t>(l * m);
    BinaryMatrix at = bicycle_polynomial_matrix(l, m, a_terms).transposed();
    BinaryMatrix bt = bicycle_polynomial_matrix(l, m, b_terms).transposed();
    BinaryMatrix s(lm, 2 * lm);
    for (std::size_t i = 0; i < lm; ++i) {
      bt.row(i).for_each_set([&](std::size_t j) { s.set(i, j); });
      at.row(i).for_each_set([&](std::size_t j) { s.set(i, lm + j); });
    }
    return s;
  }

  // Qubit permutations generated by the l*m torus translations; every one
  // maps checks to checks and preserves logical equivalence.
  std::vector<std::vector<std::int32_t>> translation_group() const {
    std::vector<std::vector<std::int32_t>> group;
    const std::int64_t lm = l * m;
    group.reserve(static_cast<std::size_t>(lm));
    for (std::int64_t a = 0; a < l; ++a)
      for (std::int64_t b = 0; b < m; ++b) {
        std::vector<std::int32_t> perm(num_qubits());
        for (std::int64_t u = 0; u < l; ++u)
          for (std::int64_t v = 0; v < m; ++v) {
            const std::int64_t from = u * m + v;
            const std::int64_t to =
                static_cast<std::int64_t>(detail::torus_wrap(u + a, l)) * m +
                static_cast<std::int64_t>(detail::torus_wrap(v + b, m));
            perm[static_cast<std::size_t>(from)] = static_cast<std::int32_t>(to);
            perm[static_cast<std::size_t>(lm + from)] =
                static_cast<std::int32_t>(lm + to);
          }
        group.push_back(std::move(perm));
      }
    return group;
  }
};

// The three standard instances, keyed by code distance.
inline BicycleCode bicycle_code(int distance) {
  switch (distance) {
    case 6:
      return BicycleCode{6, 6, {{3, 0}, {0, 1}, {0, 2}}, {{0, 3}, {1, 0}, {2, 0}}};
    case 12:
      return BicycleCode{12, 6, {{3, 0}, {0, 1}, {0, 2}}, {{0, 3}, {1, 0}, {2, 0}}};
    case 18:
      return BicycleCode{12, 12, {{3, 0}, {0, 2}, {0, 7}}, {{0, 3}, {1, 0}, {2, 0}}};
    default:
      throw std::invalid_argument("no bicycle instance with that distance");
  }
}

inline FaultSystem bicycle_bitflip_system(int distance) {
  BicycleCode code = bicycle_code(distance);
  return css_bitflip_system(code.stab_x(), code.stab_z());
}

}  // namespace rareqec
