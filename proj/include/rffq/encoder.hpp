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

// Rotation-invariant encoding of a d-level system into n = d + 1 spins.
//
// Q(lambda, lambda') = sum_{m2} |j2, m2; lambda><j2, m2; lambda'| is a full
// set of matrix units acting on the lambda ("signal") label and as identity
// on the m2 ("idler") label. A logical state rho becomes
//
//   payload = (1/d) sum rho[lambda, lambda'] Q(lambda, lambda'),
//
// i.e. rho on the signal with a maximally mixed idler, and a POVM element Pi
// becomes sum Pi[lambda, lambda'] Q(lambda, lambda'). Every Q commutes with
// total angular momentum, so collective rotations act on the idler only.

#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "rffq/coupling.hpp"
#include "rffq/error.hpp"
#include "rffq/linalg.hpp"
#include "rffq/spinsys.hpp"

namespace rffq {

/// A validated d x d density matrix.
class QuditState {
 public:
  static QuditState from_matrix(const CMatrix& rho,
                                double hermiticity_tol = kHermiticityTolerance,
                                double trace_tol = 1e-12,
                                double psd_tol = kPsdTolerance) {
    if (rho.rows() != rho.cols() || rho.rows() < 1) {
      throw ValidationError("state: density matrix must be square");
    }
    if (!all_finite(rho)) throw ValidationError("state: non-finite entry");
    const double herm = hermiticity_defect(rho);
    if (herm > hermiticity_tol) {
      std::ostringstream os;
      os << "state: not hermitian (max |rho - rho^dagger| = " << herm << ")";
      throw ValidationError(os.str());
    }
    const Complex tr = rho.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > trace_tol) {
      std::ostringstream os;
      os << "state: trace is " << tr.real();
      if (tr.imag() != 0.0) os << (tr.imag() < 0 ? " - " : " + ") << std::abs(tr.imag()) << "i";
      os << ", expected 1";
      throw ValidationError(os.str());
    }
    const CMatrix sym = 0.5 * (rho + rho.adjoint());
    const double min_ev = hermitian_eig(sym).values(0);
    if (min_ev < -psd_tol) {
      std::ostringstream os;
      os << "state: not positive semidefinite (eigenvalue " << min_ev << ")";
      throw ValidationError(os.str());
    }
    return QuditState(sym);
  }

  int d() const { return static_cast<int>(rho_.rows()); }
  const CMatrix& rho() const { return rho_; }

 private:
  explicit QuditState(CMatrix rho) : rho_(std::move(rho)) {}
  CMatrix rho_;
};

/// A validated POVM on a d-level system.
class QuditPovm {
 public:
  static QuditPovm from_elements(std::vector<CMatrix> elements,
                                 double tol = kDefaultTolerance) {
    if (elements.empty()) throw ValidationError("POVM: no elements");
    const Eigen::Index d = elements.front().rows();
    CMatrix sum = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < elements.size(); ++k) {
      CMatrix& e = elements[k];
      if (e.rows() != d || e.cols() != d) {
        std::ostringstream os;
        os << "POVM: element " << k << " is not " << d << "x" << d;
        throw ValidationError(os.str());
      }
      const double herm = hermiticity_defect(e);
      if (herm > kHermiticityTolerance) {
        std::ostringstream os;
        os << "POVM: element " << k << " is not hermitian (defect " << herm
           << ")";
        throw ValidationError(os.str());
      }
      e = 0.5 * (e + e.adjoint()).eval();
      const double min_ev = hermitian_eig(e).values(0);
      if (min_ev < -tol) {
        std::ostringstream os;
        os << "POVM: element " << k
           << " is not positive semidefinite (eigenvalue " << min_ev << ")";
        throw ValidationError(os.str());
      }
      sum += e;
    }
    const double completeness = max_abs(sum - CMatrix::Identity(d, d));
    if (completeness > tol) {
      std::ostringstream os;
      os << "POVM: elements do not sum to the identity (max deviation "
         << completeness << ")";
      throw ValidationError(os.str());
    }
    return QuditPovm(std::move(elements));
  }

  int d() const { return static_cast<int>(elements_.front().rows()); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<CMatrix>& elements() const { return elements_; }
  const CMatrix& operator[](std::size_t k) const { return elements_.at(k); }

 private:
  explicit QuditPovm(std::vector<CMatrix> e) : elements_(std::move(e)) {}
  std::vector<CMatrix> elements_;
};

struct EncodedOperator {
  enum class Kind { state, povm_element };

  int n = 0;
  CMatrix payload;
  Kind kind = Kind::state;
  std::string coupling;  // CouplingMatrix::fingerprint()

  int d() const { return n - 1; }
};

inline const char* to_string(EncodedOperator::Kind k) {
  return k == EncodedOperator::Kind::state ? "state" : "povm-element";
}

/// The d^2 operators Q(lambda, lambda') of one coupled basis.
class QOperatorSet {
 public:
  int n() const { return basis_->n(); }
  int d() const { return basis_->d(); }
  const CoupledBasis& basis() const { return *basis_; }
  std::string coupling_fingerprint() const {
    return basis_->coupling().fingerprint();
  }

  /// Q(lambda, lambda'), both 1-based.
  const CMatrix& q(int lambda, int lambda_prime) const {
    check(lambda);
    check(lambda_prime);
    return q_[static_cast<std::size_t>((lambda - 1) * d() + (lambda_prime - 1))];
  }

  /// Projector onto the j2 sector, sum_lambda Q(lambda, lambda).
  const CMatrix& sector_projector() const { return projector_; }

 private:
  friend QOperatorSet build_q_set(std::shared_ptr<const CoupledBasis>, double);

  explicit QOperatorSet(std::shared_ptr<const CoupledBasis> basis)
      : basis_(std::move(basis)) {}

  void check(int lambda) const {
    if (lambda < 1 || lambda > d()) {
      std::ostringstream os;
      os << "lambda " << lambda << " outside 1.." << d();
      throw ContractError(os.str());
    }
  }

  std::shared_ptr<const CoupledBasis> basis_;
  std::vector<CMatrix> q_;
  CMatrix projector_;
};

namespace detail {
inline Eigen::SparseMatrix<Complex> sparse_j_minus(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::vector<Eigen::Triplet<Complex>> entries;
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    for (int l = 1; l <= n; ++l) {
      const Eigen::Index bit = Eigen::Index{1} << (n - l);
      if ((idx & bit) == 0) entries.emplace_back(idx | bit, idx, 1.0);
    }
  }
  Eigen::SparseMatrix<Complex> m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

inline RVector jz_diagonal(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  RVector m(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    const int ones = __builtin_popcountll(static_cast<unsigned long long>(idx));
    m(idx) = 0.5 * (n - 2 * ones);
  }
  return m;
}

inline void require(double residual, double tol, const std::string& what) {
  if (!(residual <= tol)) {
    std::ostringstream os;
    os << what << " violated: residual " << residual << " > " << tol;
    throw ConsistencyError(os.str());
  }
}
}  // namespace detail

/// Builds all Q(lambda, lambda') and verifies closure (through the Gram
/// matrix of the kets), dagger symmetry, traces and commutation with Jz and
/// J_-. Commutation with J_+ follows from the J_- check and dagger symmetry.
inline QOperatorSet build_q_set(std::shared_ptr<const CoupledBasis> basis,
                                double tol = kDefaultTolerance) {
  if (!basis) throw ContractError("build_q_set: null basis");
  QOperatorSet qs(basis);
  const int d = basis->d();
  const Eigen::Index dim = basis->dim();
  qs.q_.reserve(static_cast<std::size_t>(d) * d);
  for (int a = 1; a <= d; ++a) {
    for (int b = 1; b <= d; ++b) {
      CMatrix q = CMatrix::Zero(dim, dim);
      for (int k = 0; k < basis->m2_count(); ++k) {
        const CMatrix& blk = basis->block(k);
        q.noalias() += blk.col(a - 1) * blk.col(b - 1).adjoint();
      }
      qs.q_.push_back(std::move(q));
    }
  }
  qs.projector_ = CMatrix::Zero(dim, dim);
  for (int a = 1; a <= d; ++a) qs.projector_ += qs.q(a, a);

  detail::require(basis->gram_residual(), tol,
                  "closure Q(a,b) Q(c,e) = delta(b,c) Q(a,e) (Gram matrix)");
  const Eigen::SparseMatrix<Complex> jm = detail::sparse_j_minus(basis->n());
  const RVector jz = detail::jz_diagonal(basis->n());
  for (int a = 1; a <= d; ++a) {
    for (int b = 1; b <= d; ++b) {
      const CMatrix& q = qs.q(a, b);
      std::ostringstream tag;
      tag << " for Q(" << a << "," << b << ")";
      detail::require(max_diff(q.adjoint(), qs.q(b, a)), 1e-12,
                      "dagger symmetry" + tag.str());
      const Complex expected_trace(a == b ? d : 0, 0.0);
      detail::require(std::abs(q.trace() - expected_trace), tol,
                      "trace Tr Q(a,b) = d delta(a,b)" + tag.str());
      CMatrix cz = q * jz.cast<Complex>().asDiagonal();
      cz -= jz.cast<Complex>().asDiagonal() * q;
      detail::require(max_abs(cz), tol, "[Q, Jz] = 0" + tag.str());
      const CMatrix cm = q * jm - jm * q;
      detail::require(max_abs(cm), tol, "[Q, J-] = 0" + tag.str());
    }
  }
  return qs;
}

inline QOperatorSet build_q_set(CoupledBasis basis,
                                double tol = kDefaultTolerance) {
  return build_q_set(std::make_shared<const CoupledBasis>(std::move(basis)),
                     tol);
}

/// Linear map X -> (1/d) sum X[a,b] Q(a,b) for any d x d matrix.
inline CMatrix encode_operator(const QOperatorSet& qs, const CMatrix& x) {
  const int d = qs.d();
  if (x.rows() != d || x.cols() != d) {
    std::ostringstream os;
    os << "encode: logical matrix is " << x.rows() << "x" << x.cols()
       << " but the register carries d = " << d;
    throw ContractError(os.str());
  }
  CMatrix out = CMatrix::Zero(qs.basis().dim(), qs.basis().dim());
  for (int a = 1; a <= d; ++a) {
    for (int b = 1; b <= d; ++b) {
      const Complex c = x(a - 1, b - 1);
      if (c != Complex(0.0, 0.0)) out += c * qs.q(a, b);
    }
  }
  return out / static_cast<double>(d);
}

/// Inverse of encode_operator: X[a,b] = Tr(Q(b,a) Y).
inline CMatrix decode_operator(const QOperatorSet& qs, const CMatrix& y) {
  const int d = qs.d();
  if (y.rows() != qs.basis().dim() || y.cols() != qs.basis().dim()) {
    throw ContractError("decode: payload dimension does not match 2^n");
  }
  CMatrix out(d, d);
  for (int a = 1; a <= d; ++a) {
    for (int b = 1; b <= d; ++b) {
      // Tr(Q(b,a) Y) without forming the product.
      out(a - 1, b - 1) = (qs.q(b, a).transpose().cwiseProduct(y)).sum();
    }
  }
  return out;
}

inline EncodedOperator encode_state(const QOperatorSet& qs,
                                    const QuditState& rho) {
  if (rho.d() != qs.d()) {
    std::ostringstream os;
    os << "encode_state: state has d = " << rho.d() << ", register needs d = "
       << qs.d();
    throw ContractError(os.str());
  }
  return {qs.n(), encode_operator(qs, rho.rho()), EncodedOperator::Kind::state,
          qs.coupling_fingerprint()};
}

/// Each element maps to sum Pi[a,b] Q(a,b); the images sum to the sector
/// projector, not the full identity.
inline std::vector<EncodedOperator> encode_povm(const QOperatorSet& qs,
                                                const QuditPovm& povm) {
  if (povm.d() != qs.d()) {
    std::ostringstream os;
    os << "encode_povm: POVM has d = " << povm.d() << ", register needs d = "
       << qs.d();
    throw ContractError(os.str());
  }
  std::vector<EncodedOperator> out;
  out.reserve(povm.size());
  for (const CMatrix& e : povm.elements()) {
    out.push_back({qs.n(), static_cast<double>(qs.d()) * encode_operator(qs, e),
                   EncodedOperator::Kind::povm_element,
                   qs.coupling_fingerprint()});
  }
  return out;
}

/// Weight outside the j2 sector: Tr(payload) - Tr(I_j2 payload).
inline double leakage(const QOperatorSet& qs, const CMatrix& payload) {
  const Complex inside = (qs.sector_projector().transpose().cwiseProduct(payload)).sum();
  return (payload.trace() - inside).real();
}

/// max |I_j2 Y I_j2 - Y|
inline double out_of_sector_defect(const QOperatorSet& qs, const CMatrix& y) {
  const CMatrix& p = qs.sector_projector();
  return max_abs(p * y * p - y);
}

/// Recovers the logical state. The payload must live on the j2 sector and
/// is normalized by its in-sector trace.
inline QuditState decode_state(const QOperatorSet& qs,
                               const EncodedOperator& enc,
                               double tol = kDefaultTolerance) {
  if (enc.n != qs.n()) throw ContractError("decode_state: n mismatch");
  if (enc.coupling != qs.coupling_fingerprint()) {
    throw ContractError("decode_state: payload was encoded with coupling '" +
                        enc.coupling + "', decoder uses '" +
                        qs.coupling_fingerprint() + "'");
  }
  const double defect = out_of_sector_defect(qs, enc.payload);
  if (defect > tol) {
    std::ostringstream os;
    os << "decode_state: payload is not supported on the j2 sector (defect "
       << defect << ")";
    throw ValidationError(os.str());
  }
  CMatrix rho = decode_operator(qs, enc.payload);
  const Complex tr = rho.trace();
  if (std::abs(tr) < tol) {
    throw ValidationError("decode_state: payload has no weight in the sector");
  }
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuditState::from_matrix(rho, 1e-9, 1e-9, 1e-9);
}

struct EntropyCheck {
  double s_logical = 0.0;  // bits
  double s_encoded = 0.0;  // bits
  double defect = 0.0;     // s_encoded - s_logical - log2 d
};

inline EntropyCheck encoded_entropy_check(const QuditState& rho,
                                          const EncodedOperator& enc) {
  EntropyCheck out;
  out.s_logical = von_neumann_entropy_bits(rho.rho());
  out.s_encoded = von_neumann_entropy_bits(enc.payload);
  out.defect = out.s_encoded - out.s_logical - std::log2(static_cast<double>(rho.d()));
  return out;
}

/// Heisenberg-Weyl-Schwinger pair U = sum omega_d^a Q(a,a),
/// V = sum_{a<d} Q(a,a+1) + Q(d,1).
struct HwsPair {
  int d = 0;
  CMatrix u;
  CMatrix v;
  Complex omega;
};

struct HwsResiduals {
  double u_period = 0.0;     // |U^d - I_j2|
  double v_period = 0.0;     // |V^d - I_j2|
  double commutation = 0.0;  // max_{j,k} |U^j V^k - omega^{-jk} V^k U^j|
};

inline CMatrix matrix_power(const CMatrix& a, int k) {
  CMatrix out = CMatrix::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

inline HwsResiduals hws_residuals(const HwsPair& hws,
                                  const CMatrix& sector_projector) {
  HwsResiduals r;
  const int d = hws.d;
  const CMatrix& p = sector_projector;
  r.u_period = max_abs(p * matrix_power(hws.u, d) * p - p);
  r.v_period = max_abs(p * matrix_power(hws.v, d) * p - p);
  std::vector<CMatrix> upow{p}, vpow{p};
  for (int k = 1; k <= d; ++k) {
    upow.push_back(upow.back() * hws.u);
    vpow.push_back(vpow.back() * hws.v);
  }
  for (int j = 1; j <= d; ++j) {
    for (int k = 1; k <= d; ++k) {
      const CMatrix lhs = upow[static_cast<std::size_t>(j)] * vpow[static_cast<std::size_t>(k)];
      const CMatrix rhs = root_of_unity(d, -static_cast<long long>(j) * k) *
                          vpow[static_cast<std::size_t>(k)] * upow[static_cast<std::size_t>(j)];
      r.commutation = std::max(r.commutation, max_abs(lhs - rhs));
    }
  }
  return r;
}

inline HwsPair build_hws(const QOperatorSet& qs,
                         double tol = kDefaultTolerance) {
  const int d = qs.d();
  if (d < 2) throw ContractError("build_hws: d must be at least 2");
  HwsPair hws{d, CMatrix::Zero(qs.basis().dim(), qs.basis().dim()),
              CMatrix::Zero(qs.basis().dim(), qs.basis().dim()),
              root_of_unity(d, 1)};
  for (int a = 1; a <= d; ++a) hws.u += root_of_unity(d, a) * qs.q(a, a);
  for (int a = 1; a < d; ++a) hws.v += qs.q(a, a + 1);
  hws.v += qs.q(d, 1);
  const HwsResiduals r = hws_residuals(hws, qs.sector_projector());
  detail::require(r.u_period, tol, "U^d = I on the sector");
  detail::require(r.v_period, tol, "V^d = I on the sector");
  detail::require(r.commutation, tol, "U^j V^k = omega^{-jk} V^k U^j");
  return hws;
}

}  // namespace rffq
