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

// Dense complex linear algebra on top of Eigen.
//
// Every operator, state and ket in the library is carried by a dense
// Eigen::MatrixXcd (kets are D x 1). Comparisons use the
// max-norm of the entrywise difference. The only global knob is the
// dimension ceiling, 4096 (= 2^12) by default.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "rffq/error.hpp"

namespace rffq {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kDegeneracyTolerance = 1e-8;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr std::size_t kDefaultDimensionLimit = 4096;

namespace detail {
inline std::atomic<std::size_t>& dimension_limit_storage() {
  static std::atomic<std::size_t> limit{kDefaultDimensionLimit};
  return limit;
}
}  // namespace detail

/// Largest matrix side length any factory may produce.
inline std::size_t dimension_limit() {
  return detail::dimension_limit_storage().load(std::memory_order_relaxed);
}

/// Meant to be called once at startup (CLI --max-n / RFF_MAX_N).
inline void set_dimension_limit(std::size_t limit) {
  if (limit < 2) throw ContractError("dimension limit must be at least 2");
  detail::dimension_limit_storage().store(limit, std::memory_order_relaxed);
}

inline void check_dimension(std::size_t dim) {
  if (dim > dimension_limit()) {
    std::ostringstream os;
    os << "requested dimension " << dim << " exceeds the configured limit "
       << dimension_limit();
    throw SizeLimitError(os.str());
  }
}

/// omega_n^k = exp(2 pi i k / n), reduced mod n so integer powers are exact
/// where they can be (1, i, -1, -i).
inline Complex root_of_unity(int n, long long k) {
  long long r = ((k % n) + n) % n;
  if (r == 0) return {1.0, 0.0};
  if (2 * r == n) return {-1.0, 0.0};
  if (4 * r == n) return {0.0, 1.0};
  if (4 * r == 3LL * n) return {0.0, -1.0};
  const double phase = 2.0 * kPi * static_cast<double>(r) / n;
  return {std::cos(phase), std::sin(phase)};
}

inline CMatrix identity(Eigen::Index dim) {
  check_dimension(static_cast<std::size_t>(dim));
  return CMatrix::Identity(dim, dim);
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  check_dimension(static_cast<std::size_t>(a.rows()) *
                  static_cast<std::size_t>(b.rows()));
  check_dimension(static_cast<std::size_t>(a.cols()) *
                  static_cast<std::size_t>(b.cols()));
  return Eigen::kroneckerProduct(a, b).eval();
}

/// a^{(x) n}; kron_power(a, 0) is the 1x1 identity.
inline CMatrix kron_power(const CMatrix& a, int n) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

inline CMatrix dagger(const CMatrix& a) { return a.adjoint(); }

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  return a * b - b * a;
}

inline double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double max_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << "shape mismatch: " << a.rows() << "x" << a.cols() << " vs "
       << b.rows() << "x" << b.cols();
    throw ContractError(os.str());
  }
  return max_abs(a - b);
}

inline bool approx_equal(const CMatrix& a, const CMatrix& b,
                         double tol = kDefaultTolerance) {
  return a.rows() == b.rows() && a.cols() == b.cols() && max_diff(a, b) <= tol;
}

inline bool all_finite(const CMatrix& a) { return a.allFinite(); }

inline double hermiticity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) throw ContractError("matrix is not square");
  return max_abs(a - a.adjoint());
}

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns, unitary
};

/// Eigendecomposition of a hermitian matrix. Input must be hermitian to
/// `hermiticity_tol` in max-norm; the reconstruction residual is checked.
inline HermitianEigen hermitian_eig(
    const CMatrix& a, double hermiticity_tol = kHermiticityTolerance) {
  if (a.rows() != a.cols()) throw ContractError("hermitian_eig: not square");
  if (!all_finite(a)) throw ContractError("hermitian_eig: non-finite entry");
  const double defect = hermiticity_defect(a);
  if (defect > hermiticity_tol) {
    std::ostringstream os;
    os << "hermitian_eig: input is not hermitian (max |a - a^dagger| = "
       << defect << " > " << hermiticity_tol << ")";
    throw ContractError(os.str());
  }
  const CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "hermitian_eig: eigensolver did not converge (dim " << a.rows()
       << ", max|a| = " << max_abs(a) << ")";
    throw NumericalError(os.str());
  }
  HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
  const double scale = std::max(max_abs(a), 1.0);
  const double residual =
      max_abs(sym * out.vectors -
              out.vectors * out.values.cast<Complex>().asDiagonal());
  if (residual > 1e-9 * scale) {
    std::ostringstream os;
    os << "hermitian_eig: residual " << residual << " exceeds 1e-9 * "
       << scale;
    throw NumericalError(os.str());
  }
  return out;
}

/// Traces out one qubit factor of a 2^n x 2^n matrix. Factors are numbered
/// 1..n from the most significant (leftmost) one.
inline CMatrix partial_trace(const CMatrix& a, int n_factors,
                             int traced_factor) {
  if (n_factors < 1) throw ContractError("partial_trace: n_factors < 1");
  if (traced_factor < 1 || traced_factor > n_factors) {
    throw ContractError("partial_trace: traced factor out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_factors;
  if (a.rows() != dim || a.cols() != dim) {
    std::ostringstream os;
    os << "partial_trace: expected " << dim << "x" << dim << ", got "
       << a.rows() << "x" << a.cols();
    throw ContractError(os.str());
  }
  const int shift = n_factors - traced_factor;
  const Eigen::Index low_mask = (Eigen::Index{1} << shift) - 1;
  const Eigen::Index out_dim = dim / 2;
  // Reinserts bit `b` at position `shift` of a reduced index.
  auto expand = [&](Eigen::Index r, Eigen::Index b) {
    return ((r & ~low_mask) << 1) | (b << shift) | (r & low_mask);
  };
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (Eigen::Index c = 0; c < out_dim; ++c) {
    for (Eigen::Index r = 0; r < out_dim; ++r) {
      out(r, c) = a(expand(r, 0), expand(c, 0)) + a(expand(r, 1), expand(c, 1));
    }
  }
  return out;
}

/// exp(-i t h) for hermitian h, via the spectral decomposition.
inline CMatrix expm_hermitian(const CMatrix& h, double t) {
  const HermitianEigen eig = hermitian_eig(h);
  CVector phases(eig.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(-kI * t * eig.values(i));
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

namespace detail {
inline RVector clipped_spectrum(const CMatrix& rho, double psd_tol,
                                const char* who) {
  RVector ev = hermitian_eig(rho).values;
  if (ev.size() > 0 && ev(0) < -psd_tol) {
    std::ostringstream os;
    os << who << ": matrix has eigenvalue " << ev(0) << " below -" << psd_tol;
    throw ContractError(os.str());
  }
  return ev.cwiseMax(0.0);
}
}  // namespace detail

/// Principal square root of a positive semidefinite matrix.
inline CMatrix sqrtm_psd(const CMatrix& a, double psd_tol = kPsdTolerance) {
  const HermitianEigen eig = hermitian_eig(a);
  if (eig.values.size() > 0 && eig.values(0) < -psd_tol) {
    std::ostringstream os;
    os << "sqrtm_psd: eigenvalue " << eig.values(0) << " below -" << psd_tol;
    throw ContractError(os.str());
  }
  const RVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.cast<Complex>().asDiagonal() *
         eig.vectors.adjoint();
}

/// Von Neumann entropy in bits, with 0 log 0 = 0.
inline double von_neumann_entropy_bits(const CMatrix& rho,
                                       double psd_tol = kPsdTolerance) {
  const RVector ev = detail::clipped_spectrum(rho, psd_tol, "entropy");
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 0.0) s -= ev(i) * std::log2(ev(i));
  }
  return s;
}

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double uhlmann_fidelity(const CMatrix& rho, const CMatrix& sigma) {
  const CMatrix root = sqrtm_psd(rho);
  CMatrix inner = root * sigma * root;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  const RVector ev = hermitian_eig(inner, 1e-9).values.cwiseMax(0.0);
  const double f = ev.cwiseSqrt().sum();
  return f * f;
}

/// (1/2) || rho - sigma ||_1.
inline double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  CMatrix diff = rho - sigma;
  diff = 0.5 * (diff + diff.adjoint()).eval();
  return 0.5 * hermitian_eig(diff, 1e-9).values.cwiseAbs().sum();
}

}  // namespace rffq
