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

// Symmetric coupling of n spin-1/2 constituents.
//
// The sector with second-largest total angular momentum j2 = n/2 - 1 occurs
// n - 1 times. Its kets are
//
//   |j2, m2; lambda> = sqrt((j2+m2)! / ((2 j2)! (j2-m2)!))
//                        Omega(lambda) J_-^{j2-m2} |0...0>,
//
// with Omega(lambda) = sum_l U[lambda, l] sigma_-^(l) for a unitary coupling
// matrix U whose last row is n^{-1/2} (1, ..., 1). The default U is the
// discrete Fourier matrix, U[lambda, l] = omega_n^{lambda l} / sqrt(n).
//
// Angular momenta are handled as twice their value (two_j, two_m) so that
// half-integers stay exact.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rffq/error.hpp"
#include "rffq/linalg.hpp"
#include "rffq/spinsys.hpp"

namespace rffq {

/// "3/2", "-1/2", "1", "0" for a value given as twice itself.
inline std::string half_integer_label(int twice) {
  std::ostringstream os;
  if (twice % 2 == 0) {
    os << twice / 2;
  } else {
    os << twice << "/2";
  }
  return os.str();
}

namespace detail {
using BigUInt = unsigned __int128;

inline BigUInt factorial(int k) {
  if (k < 0) throw ContractError("factorial of a negative number");
  if (k > 33) throw SizeLimitError("factorial argument too large");
  BigUInt out = 1;
  for (int i = 2; i <= k; ++i) out *= static_cast<BigUInt>(i);
  return out;
}
}  // namespace detail

/// Whether j (given as two_j) belongs to the index set {n/2, n/2-1, ...}.
inline bool in_index_set(int n, int two_j) {
  return two_j >= 0 && two_j <= n && (n - two_j) % 2 == 0;
}

/// Multiplicity c_j = n! (2j+1) / ((n/2+j+1)! (n/2-j)!) of spin j among n
/// spin-1/2 constituents, in exact integer arithmetic.
inline long long multiplicity(int n, int two_j) {
  if (n < 1 || n > 30) throw ContractError("multiplicity: n outside 1..30");
  if (!in_index_set(n, two_j)) {
    std::ostringstream os;
    os << "multiplicity: j = " << half_integer_label(two_j)
       << " is not in the index set for n = " << n;
    throw ContractError(os.str());
  }
  const int upper = (n + two_j) / 2 + 1;  // n/2 + j + 1
  const int lower = (n - two_j) / 2;      // n/2 - j
  const detail::BigUInt num =
      detail::factorial(n) * static_cast<detail::BigUInt>(two_j + 1);
  const detail::BigUInt den = detail::factorial(upper) * detail::factorial(lower);
  if (num % den != 0) throw ConsistencyError("multiplicity is not an integer");
  return static_cast<long long>(num / den);
}

struct SectorSpec {
  int n = 0;
  int two_j = 0;
  long long multiplicity = 0;
  int dimension = 0;  // 2j + 1

  std::string j_label() const { return half_integer_label(two_j); }
  friend bool operator==(const SectorSpec&, const SectorSpec&) = default;
};

/// n x n unitary with last row n^{-1/2} (1, ..., 1). Rows 1..n-1 select the
/// lambda channels of the j2 sector.
class CouplingMatrix {
 public:
  enum class Kind { fourier, conjugate_fourier, explicit_matrix };

  static CouplingMatrix fourier(int n) {
    return CouplingMatrix(fourier_matrix(n, +1), Kind::fourier);
  }

  /// Fourier matrix with omega_n replaced by its conjugate; relabels lambda
  /// as n - lambda relative to fourier().
  static CouplingMatrix conjugate_fourier(int n) {
    return CouplingMatrix(fourier_matrix(n, -1), Kind::conjugate_fourier);
  }

  /// Validates an arbitrary candidate. Throws ValidationError naming the
  /// violated invariant.
  static CouplingMatrix from_matrix(const CMatrix& u, double tol = 1e-12) {
    if (u.rows() != u.cols() || u.rows() < 2) {
      throw ValidationError("coupling matrix must be square with n >= 2");
    }
    const Eigen::Index n = u.rows();
    const double unitarity =
        max_abs(u * u.adjoint() - CMatrix::Identity(n, n));
    if (unitarity > tol) {
      std::ostringstream os;
      os << "coupling matrix violates unitarity: max |U U^dagger - I| = "
         << unitarity << " > " << tol;
      throw ValidationError(os.str());
    }
    const double target = 1.0 / std::sqrt(static_cast<double>(n));
    const double last_row =
        (u.row(n - 1).array() - Complex(target, 0.0)).abs().maxCoeff();
    if (last_row > tol) {
      std::ostringstream os;
      os << "coupling matrix violates the symmetric last row: max |U[n,l] - "
            "n^-1/2| = "
         << last_row << " > " << tol;
      throw ValidationError(os.str());
    }
    return CouplingMatrix(u, Kind::explicit_matrix);
  }

  int n() const { return static_cast<int>(u_.rows()); }
  const CMatrix& matrix() const { return u_; }
  Kind kind() const { return kind_; }

  /// Coefficient U[lambda, l], both 1-based.
  Complex operator()(int lambda, int l) const { return u_(lambda - 1, l - 1); }

  /// Stable label identifying this coupling for encode/decode pairing.
  std::string fingerprint() const {
    switch (kind_) {
      case Kind::fourier:
        return "fourier";
      case Kind::conjugate_fourier:
        return "conjugate-fourier";
      case Kind::explicit_matrix:
        break;
    }
    // FNV-1a over the raw bits of the entries.
    std::uint64_t h = 1469598103934665603ULL;
    for (Eigen::Index c = 0; c < u_.cols(); ++c) {
      for (Eigen::Index r = 0; r < u_.rows(); ++r) {
        for (double part : {u_(r, c).real(), u_(r, c).imag()}) {
          const auto* bytes = reinterpret_cast<const unsigned char*>(&part);
          for (std::size_t i = 0; i < sizeof(double); ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
          }
        }
      }
    }
    std::ostringstream os;
    os << "explicit:" << std::hex << h;
    return os.str();
  }

 private:
  CouplingMatrix(CMatrix u, Kind kind) : u_(std::move(u)), kind_(kind) {}

  static CMatrix fourier_matrix(int n, int sign) {
    if (n < 2) throw ContractError("coupling matrix needs n >= 2");
    check_dimension(static_cast<std::size_t>(n));
    CMatrix u(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int lambda = 1; lambda <= n; ++lambda) {
      for (int l = 1; l <= n; ++l) {
        u(lambda - 1, l - 1) =
            scale * root_of_unity(n, static_cast<long long>(sign) * lambda * l);
      }
    }
    return u;
  }

  CMatrix u_;
  Kind kind_;
};

/// out = sum_l weights[l-1] sigma_-^(l) v, applied without forming the
/// 2^n x 2^n operator.
inline CVector apply_lowering(int n, const CVector& v,
                              const std::vector<Complex>& weights) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (v.size() != dim || static_cast<int>(weights.size()) != n) {
    throw ContractError("apply_lowering: size mismatch");
  }
  CVector out = CVector::Zero(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    if (v(idx) == Complex(0.0, 0.0)) continue;
    for (int l = 1; l <= n; ++l) {
      const Eigen::Index bit = Eigen::Index{1} << (n - l);
      if ((idx & bit) == 0) out(idx | bit) += weights[static_cast<std::size_t>(l - 1)] * v(idx);
    }
  }
  return out;
}

/// Omega_-(lambda) = sum_l U[lambda, l] sigma_-^(l). lambda = n (the
/// symmetric row) is accepted and gives J_- / sqrt(n).
inline CMatrix omega_minus(const SpinRegister& reg,
                           const CouplingMatrix& coupling, int lambda) {
  if (coupling.n() != reg.n()) {
    throw ContractError("omega_minus: coupling size differs from register");
  }
  if (lambda < 1 || lambda > reg.n()) {
    std::ostringstream os;
    os << "omega_minus: lambda " << lambda << " outside 1.." << reg.n();
    throw ContractError(os.str());
  }
  CMatrix out = CMatrix::Zero(reg.dim(), reg.dim());
  for (int l = 1; l <= reg.n(); ++l) {
    out += coupling(lambda, l) * sigma(reg, l, Pauli::minus);
  }
  return out;
}

/// Orthonormal kets |j2, m2; lambda> of the second-largest sector, plus the
/// maximal sector |j1, m1>.
class CoupledBasis {
 public:
  int n() const { return n_; }
  int d() const { return n_ - 1; }
  int two_j2() const { return n_ - 2; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_; }
  const CouplingMatrix& coupling() const { return coupling_; }

  /// Number of m2 values, equal to d.
  int m2_count() const { return n_ - 1; }

  /// two_m2 of the k-th m2 value, k = j2 - m2 = 0..d-1.
  int two_m2_at(int k) const { return two_j2() - 2 * k; }

  /// |j2, m2; lambda> with m2 given as 2*m2 and lambda in 1..d.
  CVector ket(int two_m2, int lambda) const {
    return block(index_of_m2(two_m2)).col(check_lambda(lambda) - 1);
  }

  /// 2^n x d isometry whose columns are |j2, m2_k; lambda>, lambda = 1..d.
  const CMatrix& block(int k) const {
    if (k < 0 || k >= m2_count()) throw ContractError("m2 index out of range");
    return blocks_[static_cast<std::size_t>(k)];
  }

  /// |j1 = n/2, m1> with m1 given as 2*m1.
  CVector top_ket(int two_m1) const {
    if (two_m1 > n_ || two_m1 < -n_ || (n_ - two_m1) % 2 != 0) {
      throw ContractError("top_ket: m1 outside the j1 = n/2 multiplet");
    }
    return top_.col((n_ - two_m1) / 2);
  }

  /// All d^2 kets as columns, ordered by (k, lambda) with lambda fastest.
  CMatrix all_kets() const {
    CMatrix out(dim(), static_cast<Eigen::Index>(d()) * d());
    for (int k = 0; k < m2_count(); ++k) {
      out.middleCols(static_cast<Eigen::Index>(k) * d(), d()) = block(k);
    }
    return out;
  }

  /// max |G - I| for the Gram matrix of all_kets().
  double gram_residual() const {
    const CMatrix kets = all_kets();
    const CMatrix gram = kets.adjoint() * kets;
    return max_abs(gram - CMatrix::Identity(gram.rows(), gram.cols()));
  }

  int index_of_m2(int two_m2) const {
    const int k2 = two_j2() - two_m2;
    if (k2 < 0 || k2 % 2 != 0 || k2 / 2 >= m2_count()) {
      std::ostringstream os;
      os << "m2 = " << half_integer_label(two_m2) << " is not in the j2 = "
         << half_integer_label(two_j2()) << " multiplet";
      throw ContractError(os.str());
    }
    return k2 / 2;
  }

 private:
  friend CoupledBasis build_coupled_basis(const SpinRegister&,
                                          const CouplingMatrix&);

  CoupledBasis(int n, CouplingMatrix coupling)
      : n_(n), coupling_(std::move(coupling)) {}

  int check_lambda(int lambda) const {
    if (lambda < 1 || lambda > d()) {
      std::ostringstream os;
      os << "lambda " << lambda << " outside 1.." << d();
      throw ContractError(os.str());
    }
    return lambda;
  }

  int n_;
  CouplingMatrix coupling_;
  std::vector<CMatrix> blocks_;  // indexed by k = j2 - m2
  CMatrix top_;                  // column k is |j1, j1 - k>
};

inline CoupledBasis build_coupled_basis(const SpinRegister& reg,
                                        const CouplingMatrix& coupling) {
  const int n = reg.n();
  if (n < 3) throw ContractError("build_coupled_basis: n must be at least 3");
  if (coupling.n() != n) {
    throw ContractError("build_coupled_basis: coupling size differs from n");
  }
  CoupledBasis basis(n, coupling);
  const Eigen::Index dim = reg.dim();
  const int d = n - 1;
  const std::vector<Complex> ones(static_cast<std::size_t>(n), Complex(1.0, 0.0));

  // lowered[k] = J_-^k |0...0>, k = 0..n
  std::vector<CVector> lowered;
  lowered.reserve(static_cast<std::size_t>(n) + 1);
  CVector vac = CVector::Zero(dim);
  vac(0) = 1.0;
  lowered.push_back(vac);
  for (int k = 1; k <= n; ++k) lowered.push_back(apply_lowering(n, lowered.back(), ones));

  basis.top_.resize(dim, n + 1);
  for (int k = 0; k <= n; ++k) {
    basis.top_.col(k) = lowered[static_cast<std::size_t>(k)].normalized();
  }

  const int two_j2 = n - 2;
  basis.blocks_.assign(static_cast<std::size_t>(d), CMatrix(dim, d));
  for (int lambda = 1; lambda <= d; ++lambda) {
    std::vector<Complex> w(static_cast<std::size_t>(n));
    for (int l = 1; l <= n; ++l) w[static_cast<std::size_t>(l - 1)] = coupling(lambda, l);
    for (int k = 0; k < d; ++k) {
      // (j2+m2)! / ((2 j2)! (j2-m2)!) with j2 - m2 = k.
      const detail::BigUInt num = detail::factorial(two_j2 - k);
      const detail::BigUInt den =
          detail::factorial(two_j2) * detail::factorial(k);
      // num divides den, so the ratio is 1 / integer.
      const double prefactor =
          1.0 / std::sqrt(static_cast<double>(den / num));
      CVector ket =
          prefactor * apply_lowering(n, lowered[static_cast<std::size_t>(k)], w);
      const double norm = ket.norm();
      if (std::abs(norm - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "coupled ket (m2 = " << half_integer_label(two_j2 - 2 * k)
           << ", lambda = " << lambda << ") has norm " << norm;
        throw ConsistencyError(os.str());
      }
      basis.blocks_[static_cast<std::size_t>(k)].col(lambda - 1) = ket;
    }
  }
  return basis;
}

inline CoupledBasis build_coupled_basis(const SpinRegister& reg) {
  return build_coupled_basis(reg, CouplingMatrix::fourier(reg.n()));
}

/// The two j = 0 states of four constituents from the symmetric coupling,
/// |0,0;lambda> for lambda = 1, 2 (omega_3 phases).
inline std::array<CVector, 2> symmetric_singlets(const SpinRegister& reg) {
  if (reg.n() != 4) throw ContractError("symmetric_singlets requires n = 4");
  std::array<CVector, 2> out;
  const double norm = 1.0 / std::sqrt(6.0);
  for (int lambda = 1; lambda <= 2; ++lambda) {
    out[static_cast<std::size_t>(lambda - 1)] =
        norm * (root_of_unity(3, lambda) *
                    (product_ket("1001") + product_ket("0110")) +
                root_of_unity(3, 2 * lambda) *
                    (product_ket("0101") + product_ket("1010")) +
                (product_ket("0011") + product_ket("1100")));
  }
  return out;
}

/// The two j = 0 states of four constituents from successive coupling,
/// |S1> and |S2>.
inline std::array<CVector, 2> cg_singlets(const SpinRegister& reg) {
  if (reg.n() != 4) throw ContractError("cg_singlets requires n = 4");
  const CVector s1 = 0.5 * (product_ket("0101") + product_ket("1010") -
                            product_ket("1001") - product_ket("0110"));
  const CVector s2 =
      (2.0 * product_ket("0011") + 2.0 * product_ket("1100") -
       product_ket("0101") - product_ket("1010") - product_ket("0110") -
       product_ket("1001")) /
      std::sqrt(12.0);
  return {s1, s2};
}

/// Eigenvalue counts of J^2 keyed by two_j, from diagonalizing J^2 inside
/// each Jz eigenspace (the fixed-Hamming-weight product kets).
inline std::map<int, long long> j_squared_multiplicities(
    const SpinRegister& reg, double grouping_tol = kDegeneracyTolerance) {
  const int n = reg.n();
  const Eigen::Index dim = reg.dim();
  std::vector<std::vector<Eigen::Index>> by_weight(static_cast<std::size_t>(n) + 1);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    by_weight[static_cast<std::size_t>(__builtin_popcountll(
                  static_cast<unsigned long long>(idx)))]
        .push_back(idx);
  }
  // J^2 = (3n/4 - n(n-1)/4) 1 + sum_{l<l'} P_{ll'}
  const double diag_shift = 0.75 * n - 0.25 * n * (n - 1);
  std::map<int, long long> counts;
  for (const auto& members : by_weight) {
    const Eigen::Index size = static_cast<Eigen::Index>(members.size());
    std::map<Eigen::Index, Eigen::Index> pos;
    for (Eigen::Index i = 0; i < size; ++i) pos[members[static_cast<std::size_t>(i)]] = i;
    CMatrix block = CMatrix::Identity(size, size) * diag_shift;
    for (Eigen::Index i = 0; i < size; ++i) {
      const Eigen::Index idx = members[static_cast<std::size_t>(i)];
      for (int a = 1; a <= n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
          const Eigen::Index ba = (idx >> (n - a)) & 1;
          const Eigen::Index bb = (idx >> (n - b)) & 1;
          Eigen::Index swapped = idx;
          if (ba != bb) swapped ^= (Eigen::Index{1} << (n - a)) | (Eigen::Index{1} << (n - b));
          block(pos.at(swapped), i) += 1.0;
        }
      }
    }
    const RVector ev = hermitian_eig(block).values;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      // j(j+1) = v  =>  2j = sqrt(4v + 1) - 1
      const double two_j = std::sqrt(std::max(4.0 * ev(i) + 1.0, 0.0)) - 1.0;
      const int rounded = static_cast<int>(std::lround(two_j));
      const double expected = 0.25 * rounded * (rounded + 2);
      if (std::abs(ev(i) - expected) > grouping_tol) {
        std::ostringstream os;
        os << "J^2 eigenvalue " << ev(i) << " is not of the form j(j+1)";
        throw ConsistencyError(os.str());
      }
      ++counts[rounded];
    }
  }
  return counts;
}

/// Sectors of n spin-1/2 constituents, largest j first, with the
/// multiplicity formula cross-checked against J^2 diagonalization.
inline std::vector<SectorSpec> sector_census(const SpinRegister& reg) {
  const int n = reg.n();
  std::vector<SectorSpec> out;
  long long total = 0;
  for (int two_j = n; two_j >= 0; two_j -= 2) {
    SectorSpec s{n, two_j, multiplicity(n, two_j), two_j + 1};
    total += s.multiplicity * s.dimension;
    out.push_back(s);
  }
  if (total != (1LL << n)) {
    throw ConsistencyError("sector dimensions do not add up to 2^n");
  }
  const std::map<int, long long> counted = j_squared_multiplicities(reg);
  for (const SectorSpec& s : out) {
    const auto it = counted.find(s.two_j);
    const long long seen = it == counted.end() ? 0 : it->second;
    if (seen != s.multiplicity * s.dimension) {
      std::ostringstream os;
      os << "j = " << s.j_label() << ": formula gives " << s.multiplicity
         << " x " << s.dimension << " states, J^2 diagonalization finds "
         << seen;
      throw ConsistencyError(os.str());
    }
  }
  if (counted.size() != out.size()) {
    throw ConsistencyError("J^2 has eigenvalues outside the index set");
  }
  return out;
}

}  // namespace rffq
