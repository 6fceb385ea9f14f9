// Copyright 2026 The rffq Authors
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

// Operators on n spin-1/2 constituents.
//
// Basis convention: constituent 1 is the leftmost (most significant) tensor
// factor, and the single-spin ket |0> is m = +1/2, |1> is m = -1/2. A
// product ket label such as "0110" therefore maps to basis index 0b0110.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rffq/error.hpp"
#include "rffq/linalg.hpp"

namespace rffq {

using Rng = std::mt19937_64;
using Axis3 = std::array<double, 3>;

/// n spin-1/2 constituents; the Hilbert space has dimension 2^n.
class SpinRegister {
 public:
  explicit SpinRegister(int n) : n_(n) {
    if (n < 1) throw ContractError("SpinRegister: n must be at least 1");
    if (n > 30) throw SizeLimitError("SpinRegister: n too large");
    check_dimension(std::size_t{1} << n);
  }

  int n() const { return n_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_; }

  void check_site(int site) const {
    if (site < 1 || site > n_) {
      std::ostringstream os;
      os << "site " << site << " outside 1.." << n_;
      throw ContractError(os.str());
    }
  }

 private:
  int n_;
};

enum class Pauli { x, y, z, plus, minus };

inline CMatrix pauli_matrix(Pauli which) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (which) {
    case Pauli::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case Pauli::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case Pauli::plus:  // |0><1|, raises m
      m(0, 1) = 1.0;
      break;
    case Pauli::minus:  // |1><0|, lowers m
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

/// Product ket from a label like "0101" (constituent 1 first).
inline CVector product_ket(std::string_view bits) {
  if (bits.empty()) throw ContractError("product_ket: empty label");
  if (bits.size() > 30) throw SizeLimitError("product_ket: label too long");
  Eigen::Index index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw ContractError("product_ket: label must contain only 0 and 1");
    }
    index = (index << 1) | (c == '1' ? 1 : 0);
  }
  const Eigen::Index dim = Eigen::Index{1} << bits.size();
  check_dimension(static_cast<std::size_t>(dim));
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

/// Single-site operator embedded at `site`: I (x) ... (x) sigma (x) ... (x) I.
inline CMatrix sigma(const SpinRegister& reg, int site, Pauli which) {
  reg.check_site(site);
  const CMatrix left = CMatrix::Identity(Eigen::Index{1} << (site - 1),
                                         Eigen::Index{1} << (site - 1));
  const CMatrix right =
      CMatrix::Identity(Eigen::Index{1} << (reg.n() - site),
                        Eigen::Index{1} << (reg.n() - site));
  return kron(kron(left, pauli_matrix(which)), right);
}

/// sigma^(j) . sigma^(k)
inline CMatrix sigma_dot(const SpinRegister& reg, int j, int k) {
  CMatrix out = CMatrix::Zero(reg.dim(), reg.dim());
  for (Pauli a : {Pauli::x, Pauli::y, Pauli::z}) {
    out += sigma(reg, j, a) * sigma(reg, k, a);
  }
  return out;
}

struct TotalJ {
  CMatrix jx, jy, jz;
  CMatrix j_minus;  // Jx - i Jy
  CMatrix j_plus;   // Jx + i Jy
  CMatrix j_squared;
};

/// Collective angular momentum J = sum_l sigma^(l) / 2.
inline TotalJ total_j(const SpinRegister& reg) {
  const Eigen::Index dim = reg.dim();
  TotalJ j{CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim),
           CMatrix::Zero(dim, dim), {}, {}, {}};
  for (int l = 1; l <= reg.n(); ++l) {
    j.jx += 0.5 * sigma(reg, l, Pauli::x);
    j.jy += 0.5 * sigma(reg, l, Pauli::y);
    j.jz += 0.5 * sigma(reg, l, Pauli::z);
  }
  j.j_minus = j.jx - kI * j.jy;
  j.j_plus = j.jx + kI * j.jy;
  j.j_squared = j.jx * j.jx + j.jy * j.jy + j.jz * j.jz;
  return j;
}

/// Swap P_jk = (1 + sigma^(j) . sigma^(k)) / 2.
inline CMatrix swap(const SpinRegister& reg, int j, int k) {
  reg.check_site(j);
  reg.check_site(k);
  if (j == k) throw ContractError("swap: j and k must differ");
  return 0.5 * (CMatrix::Identity(reg.dim(), reg.dim()) + sigma_dot(reg, j, k));
}

/// Singlet projector S_jk = (1 - sigma^(j) . sigma^(k)) / 4.
inline CMatrix singlet_projector(const SpinRegister& reg, int j, int k) {
  reg.check_site(j);
  reg.check_site(k);
  if (j == k) throw ContractError("singlet_projector: j and k must differ");
  return 0.25 *
         (CMatrix::Identity(reg.dim(), reg.dim()) - sigma_dot(reg, j, k));
}

/// Bijection of {1..n}; images()[k-1] is where constituent k is sent.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = static_cast<int>(images_.size());
    if (n < 1) throw ContractError("Permutation: empty");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : images_) {
      if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) {
        throw ContractError("Permutation: images must be a bijection of 1..n");
      }
      seen[static_cast<std::size_t>(v - 1)] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
  }

  /// 1 -> 2 -> ... -> n -> 1
  static Permutation cyclic(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) v[static_cast<std::size_t>(k - 1)] = k % n + 1;
    return Permutation(std::move(v));
  }

  static Permutation transposition(int n, int j, int k) {
    Permutation p = identity(n);
    std::swap(p.images_.at(static_cast<std::size_t>(j - 1)),
              p.images_.at(static_cast<std::size_t>(k - 1)));
    return p;
  }

  /// All n! permutations in lexicographic order of their image lists.
  static std::vector<Permutation> all(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    std::vector<Permutation> out;
    do {
      out.emplace_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
  }

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int k) const { return images_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<int>& images() const { return images_; }

  /// (a * b)(k) = a(b(k))
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw ContractError("Permutation: size mismatch");
    std::vector<int> v(b.images_.size());
    for (int k = 1; k <= b.size(); ++k) v[static_cast<std::size_t>(k - 1)] = a(b(k));
    return Permutation(std::move(v));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// Unitary that moves the state of constituent k to position p(k).
inline CMatrix permutation_operator(const SpinRegister& reg,
                                    const Permutation& p) {
  const int n = reg.n();
  if (p.size() != n) throw ContractError("permutation_operator: size mismatch");
  const Eigen::Index dim = reg.dim();
  CMatrix w = CMatrix::Zero(dim, dim);
  for (Eigen::Index in = 0; in < dim; ++in) {
    Eigen::Index out = 0;
    for (int k = 1; k <= n; ++k) {
      const Eigen::Index bit = (in >> (n - k)) & 1;
      out |= bit << (n - p(k));
    }
    w(out, in) = 1.0;
  }
  return w;
}

inline void check_unit_axis(const Axis3& axis) {
  const double norm =
      std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "rotation axis must be a unit vector (norm " << norm << ")";
    throw ContractError(os.str());
  }
}

/// exp(-i angle (axis . sigma) / 2) on one spin-1/2.
inline CMatrix single_qubit_rotation(const Axis3& axis, double angle) {
  check_unit_axis(axis);
  const CMatrix gen = axis[0] * pauli_matrix(Pauli::x) +
                      axis[1] * pauli_matrix(Pauli::y) +
                      axis[2] * pauli_matrix(Pauli::z);
  return std::cos(angle / 2) * CMatrix::Identity(2, 2) -
         kI * std::sin(angle / 2) * gen;
}

/// exp(-i angle (axis . J)) on the whole register.
inline CMatrix collective_rotation(const SpinRegister& reg, const Axis3& axis,
                                   double angle) {
  check_unit_axis(axis);
  const TotalJ j = total_j(reg);
  const CMatrix gen = axis[0] * j.jx + axis[1] * j.jy + axis[2] * j.jz;
  return expm_hermitian(gen, angle);
}

/// Haar-random element of SU(2).
inline CMatrix haar_su2(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(2, 2);
  for (Eigen::Index c = 0; c < 2; ++c) {
    for (Eigen::Index r = 0; r < 2; ++r) g(r, c) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(2, 2);
  const CMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < 2; ++k) {
    const Complex rkk = rmat(k, k);
    const double mag = std::abs(rkk);
    if (mag > 0.0) q.col(k) *= rkk / mag;
  }
  const Complex det = q.determinant();
  return q / std::sqrt(det);
}

}  // namespace rffq
