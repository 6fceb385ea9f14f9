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

#include <cmath>

#include <gtest/gtest.h>

#include "rffq/linalg.hpp"
#include "rffq/random.hpp"
#include "rffq/spinsys.hpp"

namespace rffq {
namespace {

CMatrix diag(std::initializer_list<Complex> entries) {
  CVector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (Complex c : entries) v(i++) = c;
  return v.asDiagonal();
}

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_LT(max_diff(kron(identity(2), identity(2)), identity(4)), 1e-15);
}

TEST(Kron, SigmaZTimesIdentity) {
  EXPECT_LT(max_diff(kron(pauli_matrix(Pauli::z), identity(2)), diag({1, 1, -1, -1})), 1e-15);
}

TEST(Kron, LoweringPairTakes00To11) {
  const CMatrix sm = pauli_matrix(Pauli::minus);
  const CVector out = kron(sm, sm) * product_ket("00");
  EXPECT_LT((out - product_ket("11")).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Kron, Associative) {
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = ginibre(2, 2, rng), b = ginibre(2, 2, rng), c = ginibre(2, 2, rng);
    EXPECT_LT(max_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-14);
  }
}

TEST(Kron, RejectsDimensionBeyondLimit) {
  const std::size_t saved = dimension_limit();
  set_dimension_limit(8);
  EXPECT_THROW(kron(identity(4), identity(4)), SizeLimitError);
  set_dimension_limit(saved);
}

TEST(Dagger, Examples) {
  EXPECT_LT(max_diff(dagger(identity(2)), identity(2)), 1e-15);
  EXPECT_LT(max_diff(dagger(pauli_matrix(Pauli::minus)), pauli_matrix(Pauli::plus)), 1e-15);
  EXPECT_LT(max_diff(dagger(diag({kI, -kI})), diag({-kI, kI})), 1e-15);
}

TEST(Dagger, InvolutionAndAntiHomomorphism) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = ginibre(4, 4, rng), b = ginibre(4, 4, rng);
    EXPECT_LT(max_diff(dagger(dagger(a)), a), 1e-15);
    EXPECT_LT(max_diff(dagger(a * b), dagger(b) * dagger(a)), 1e-13);
  }
}

TEST(HermitianEig, PauliSpectra) {
  for (Pauli p : {Pauli::z, Pauli::x}) {
    const HermitianEigen e = hermitian_eig(pauli_matrix(p));
    EXPECT_NEAR(e.values(0), -1.0, 1e-14);
    EXPECT_NEAR(e.values(1), 1.0, 1e-14);
  }
}

TEST(HermitianEig, TwoSpinTotalAngularMomentum) {
  const HermitianEigen e = hermitian_eig(total_j(SpinRegister(2)).j_squared);
  EXPECT_NEAR(e.values(0), 0.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(e.values(i), 2.0, 1e-12);
}

TEST(HermitianEig, Reconstruction) {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const CMatrix g = ginibre(6, 6, rng);
    const CMatrix a = g + g.adjoint();
    const HermitianEigen e = hermitian_eig(a);
    const CMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT(max_diff(back, a), 1e-9 * max_abs(a));
    for (Eigen::Index i = 1; i < e.values.size(); ++i) EXPECT_LE(e.values(i - 1), e.values(i));
  }
}

TEST(HermitianEig, RejectsNonHermitian) {
  EXPECT_THROW(hermitian_eig(pauli_matrix(Pauli::minus)), ContractError);
}

TEST(PartialTrace, Examples) {
  EXPECT_LT(max_diff(partial_trace(identity(4), 2, 2), 2.0 * identity(2)), 1e-15);
  const CVector k01 = product_ket("01");
  const CMatrix zero = product_ket("0") * product_ket("0").adjoint();
  EXPECT_LT(max_diff(partial_trace(k01 * k01.adjoint(), 2, 2), zero), 1e-15);
  const CMatrix s12 = singlet_projector(SpinRegister(2), 1, 2);
  EXPECT_LT(max_diff(partial_trace(s12, 2, 1), 0.5 * identity(2)), 1e-15);
}

TEST(PartialTrace, FactorOrderingIsMostSignificantFirst) {
  // |0><0| (x) |1><1|: tracing factor 1 leaves |1><1|.
  const CVector k = product_ket("01");
  const CMatrix one = product_ket("1") * product_ket("1").adjoint();
  EXPECT_LT(max_diff(partial_trace(k * k.adjoint(), 2, 1), one), 1e-15);
}

TEST(PartialTrace, LinearAndTracePreserving) {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const CMatrix g = ginibre(8, 8, rng), h = ginibre(8, 8, rng);
    const CMatrix a = g + g.adjoint(), b = h + h.adjoint();
    for (int f = 1; f <= 3; ++f) {
      const CMatrix lhs = partial_trace(2.0 * a - b, 3, f);
      const CMatrix rhs = 2.0 * partial_trace(a, 3, f) - partial_trace(b, 3, f);
      EXPECT_LT(max_diff(lhs, rhs), 1e-12);
      EXPECT_LT(std::abs(partial_trace(a, 3, f).trace() - a.trace()), 1e-12);
    }
  }
}

TEST(PartialTrace, RejectsBadShapes) {
  EXPECT_THROW(partial_trace(identity(6), 2, 1), ContractError);
  EXPECT_THROW(partial_trace(identity(4), 2, 3), ContractError);
}

TEST(ExpmHermitian, Examples) {
  const CMatrix z = pauli_matrix(Pauli::z), x = pauli_matrix(Pauli::x);
  EXPECT_LT(max_diff(expm_hermitian(z, 0.0), identity(2)), 1e-15);
  const CMatrix expected = diag({std::exp(-kI * kPi / 2.0), std::exp(kI * kPi / 2.0)});
  EXPECT_LT(max_diff(expm_hermitian(z, kPi / 2.0), expected), 1e-14);
  EXPECT_LT(max_diff(expm_hermitian(x, kPi), -identity(2)), 1e-14);
}

TEST(ExpmHermitian, OutputIsUnitary) {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    const CMatrix g = ginibre(5, 5, rng);
    const CMatrix u = expm_hermitian(g + g.adjoint(), 0.37 * t);
    EXPECT_LT(max_diff(u * u.adjoint(), identity(5)), 1e-9);
  }
}

TEST(RootOfUnity, QuarterTurnsAreExact) {
  EXPECT_EQ(root_of_unity(4, 1), kI);
  EXPECT_EQ(root_of_unity(4, 2), Complex(-1.0, 0.0));
  EXPECT_EQ(root_of_unity(3, 3), Complex(1.0, 0.0));
  EXPECT_EQ(root_of_unity(3, -1), root_of_unity(3, 2));
}

TEST(Entropy, BitsAndClipping) {
  EXPECT_NEAR(von_neumann_entropy_bits(0.25 * identity(4)), 2.0, 1e-12);
  CMatrix pure = CMatrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  EXPECT_NEAR(von_neumann_entropy_bits(pure), 0.0, 1e-12);
  CMatrix bad = identity(2);
  bad(1, 1) = -0.1;
  EXPECT_THROW(von_neumann_entropy_bits(bad), ContractError);
}

TEST(Fidelity, PureStatesAndTraceDistance) {
  const CVector p0 = product_ket("0");
  const CVector plus = (product_ket("0") + product_ket("1")) / std::sqrt(2.0);
  const CMatrix a = p0 * p0.adjoint(), b = plus * plus.adjoint();
  EXPECT_NEAR(uhlmann_fidelity(a, b), 0.5, 1e-12);
  EXPECT_NEAR(uhlmann_fidelity(a, a), 1.0, 1e-12);
  EXPECT_NEAR(trace_distance(a, b), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-12);
}

}  // namespace
}  // namespace rffq
