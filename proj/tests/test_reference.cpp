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

// Transcribed operators against primitives and against the generic
// pipeline. Where a transcription differs from the generic operator, the
// exact relation between the two is pinned.

#include <cmath>

#include <gtest/gtest.h>

#include "rffq/channel.hpp"
#include "rffq/coupling.hpp"
#include "rffq/encoder.hpp"
#include "rffq/reference.hpp"

namespace rffq {
namespace {

using namespace reference;

CMatrix one(int n) { return CMatrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n); }

/// sigma_a sigma_b = delta_ab I + i eps_abc sigma_c on the sector.
double pauli_algebra_defect(const CMatrix& x, const CMatrix& y, const CMatrix& z,
                            const CMatrix& id) {
  return std::max({max_diff(x * x, id), max_diff(y * y, id), max_diff(z * z, id),
                   max_diff(x * y, kI * z), max_diff(y * z, kI * x), max_diff(z * x, kI * y),
                   max_diff(y * x, -kI * z)});
}

double q_algebra_defect(const std::vector<std::vector<CMatrix>>& q, int n) {
  const std::size_t d = q.size();
  const TotalJ j = total_j(SpinRegister(n));
  double r = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      r = std::max(r, max_diff(q[a][b].adjoint(), q[b][a]));
      for (const CMatrix* ja : {&j.jx, &j.jy, &j.jz}) r = std::max(r, max_abs(commutator(q[a][b], *ja)));
      for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t e = 0; e < d; ++e) {
          CMatrix want = CMatrix::Zero(q[a][b].rows(), q[a][b].cols());
          if (b == c) want = q[a][e];
          r = std::max(r, max_diff(q[a][b] * q[c][e], want));
        }
      }
    }
  }
  return r;
}

class ThreeConstituents : public ::testing::Test {
 protected:
  QOperatorSet generic = build_q_set(build_coupled_basis(SpinRegister(3)));
  QOperatorSet conjugate =
      build_q_set(build_coupled_basis(SpinRegister(3), CouplingMatrix::conjugate_fourier(3)));
  N3QOperators q = n3_q_operators();
  N3Pauli s = n3_pauli();
};

TEST_F(ThreeConstituents, QOperatorsAreDaggerPairsAndSumToSectorProjector) {
  EXPECT_LT(max_diff(q.q12, dagger(q.q21)), 1e-15);
  EXPECT_LT(max_diff(q.q11 + q.q22, n3_sector_projector()), 1e-12);
  const SpinRegister reg(3);
  const CMatrix swaps = swap(reg, 1, 2) + swap(reg, 2, 3) + swap(reg, 3, 1);
  EXPECT_LT(max_diff(n3_sector_projector(), one(3) - swaps / 3.0), 1e-15);
}

TEST_F(ThreeConstituents, TranscribedQsFormAMatrixUnitAlgebra) {
  EXPECT_LT(q_algebra_defect({{q.q11, q.q12}, {q.q21, q.q22}}, 3), 1e-12);
}

TEST_F(ThreeConstituents, TranscribedQsAreConjugateCouplingQs) {
  EXPECT_LT(max_diff(q.q12, conjugate.q(1, 2)), 1e-12);
  EXPECT_LT(max_diff(q.q21, conjugate.q(2, 1)), 1e-12);
  EXPECT_LT(max_diff(q.q11, conjugate.q(1, 1)), 1e-12);
  EXPECT_LT(max_diff(q.q22, conjugate.q(2, 2)), 1e-12);
}

TEST_F(ThreeConstituents, DefaultCouplingSwapsLambdaLabels) {
  EXPECT_LT(max_diff(q.q12, generic.q(2, 1)), 1e-12);
  EXPECT_LT(max_diff(q.q11, generic.q(2, 2)), 1e-12);
  EXPECT_GT(max_diff(q.q12, generic.q(1, 2)), 0.5);
  // Q12 Q21 = Q11 holds inside each family.
  EXPECT_LT(max_diff(generic.q(1, 2) * generic.q(2, 1), generic.q(1, 1)), 1e-12);
  EXPECT_LT(max_diff(q.q12 * q.q21, q.q11), 1e-12);
}

TEST_F(ThreeConstituents, PauliTranscribedFormsAgree) {
  EXPECT_LT(max_diff(s.x_swap, s.x_dot), 1e-12);
  EXPECT_LT(max_diff(s.y_swap, s.y_dot), 1e-12);
  EXPECT_LT(max_diff(s.z_commutator, s.z_triple), 1e-12);
  const SpinRegister reg(3);
  EXPECT_LT(max_diff(s.x(), (2.0 * swap(reg, 1, 2) - swap(reg, 2, 3) - swap(reg, 3, 1)) / 3.0),
            1e-15);
  EXPECT_LT(max_diff(s.y(), (swap(reg, 2, 3) - swap(reg, 3, 1)) / std::sqrt(3.0)), 1e-15);
  EXPECT_LT(max_diff(s.z() * s.z(), n3_sector_projector()), 1e-12);
  EXPECT_LT(pauli_algebra_defect(s.x(), s.y(), s.z(), n3_sector_projector()), 1e-10);
}

TEST_F(ThreeConstituents, PauliVectorAgainstGenericQs) {
  const auto paulis = [](const QOperatorSet& g) {
    return std::array<CMatrix, 3>{g.q(1, 2) + g.q(2, 1), -kI * g.q(1, 2) + kI * g.q(2, 1),
                                  g.q(1, 1) - g.q(2, 2)};
  };
  const std::array<CMatrix, 3> c = paulis(conjugate);
  EXPECT_LT(max_diff(s.x(), c[0]), 1e-12);
  EXPECT_LT(max_diff(s.y(), c[1]), 1e-12);
  EXPECT_LT(max_diff(s.z(), c[2]), 1e-12);
  const std::array<CMatrix, 3> f = paulis(generic);
  EXPECT_LT(max_diff(s.x(), f[0]), 1e-12);
  EXPECT_LT(max_diff(s.y(), -f[1]), 1e-12);
  EXPECT_LT(max_diff(s.z(), -f[2]), 1e-12);
}

TEST_F(ThreeConstituents, Trine) {
  const N3Trine t = n3_trine();
  EXPECT_LT(max_diff(2.0 / 3.0 * (t.rho[0] + t.rho[1] + t.rho[2]), n3_sector_projector()), 1e-12);
  CMatrix rho3(2, 2);
  rho3 << 0.5, -0.5, -0.5, 0.5;
  EXPECT_LT(max_diff(t.logical[2], rho3), 1e-12);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR((t.logical[j] * t.logical[j]).trace().real(), 1.0, 1e-12);
    EXPECT_NEAR(t.logical[j].trace().real(), 1.0, 1e-12);
    for (std::size_t k = 0; k < 3; ++k) {
      if (j == k) continue;
      EXPECT_NEAR((t.logical[j] * t.logical[k]).trace().real(), 0.25, 1e-12);
    }
    // Decoding through the generic pipeline gives the same logical states up
    // to the lambda relabeling, which leaves rho3 fixed.
    const QuditState back =
        decode_state(generic, {3, t.rho[j], EncodedOperator::Kind::state, "fourier"});
    EXPECT_NEAR((back.rho() * back.rho()).trace().real(), 1.0, 1e-12);
  }
}

TEST_F(ThreeConstituents, TrineProbabilityTable) {
  // POVM {2/3 rho_k} on the logical qubit, states rho_j: Tr = (2/3)|<j|k>|^2.
  const N3Trine t = n3_trine();
  std::vector<CMatrix> elements;
  for (std::size_t k = 0; k < 3; ++k) elements.push_back(2.0 / 3.0 * t.logical[k]);
  const QuditPovm povm = QuditPovm::from_elements(elements);
  std::vector<CMatrix> enc_states, enc_elements;
  for (std::size_t k = 0; k < 3; ++k) {
    enc_states.push_back(encode_state(conjugate, QuditState::from_matrix(t.logical[k])).payload);
  }
  for (const EncodedOperator& e : encode_povm(conjugate, povm)) enc_elements.push_back(e.payload);
  CMatrix sum = CMatrix::Zero(8, 8);
  for (const CMatrix& e : enc_elements) sum += e;
  EXPECT_LT(max_diff(sum, n3_sector_projector()), 1e-12);
  // Encoded elements are 2/3 of the trace-2 trine operators.
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LT(max_diff(enc_elements[k], 2.0 / 3.0 * t.rho[k]), 1e-12);
  }
  const auto p = probability_table(enc_states, enc_elements);
  for (std::size_t j = 0; j < 3; ++j) {
    double row = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(p[j][k], j == k ? 2.0 / 3.0 : 1.0 / 6.0, 1e-12);
      row += p[j][k];
    }
    EXPECT_NEAR(row, 1.0, 1e-12);
  }
}

class FourConstituents : public ::testing::Test {
 protected:
  QOperatorSet generic = build_q_set(build_coupled_basis(SpinRegister(4)));
  N4Akl o = n4_akl();
  N4QOperators q = n4_q_operators();
};

TEST_F(FourConstituents, AklDefinitions) {
  const SpinRegister reg(4);
  for (const CMatrix& a : o.a) EXPECT_LT(hermiticity_defect(a), 1e-13);
  for (const CMatrix& k : o.k) EXPECT_LT(hermiticity_defect(k), 1e-13);
  for (const CMatrix& l : o.l) EXPECT_LT(max_diff(l * l, one(4)), 1e-14);
  EXPECT_LT(max_diff(o.a[0], swap(reg, 1, 2) - swap(reg, 3, 4)), 1e-15);
  EXPECT_LT(max_diff(o.l[0], swap(reg, 1, 2) * swap(reg, 3, 4)), 1e-15);
}

TEST_F(FourConstituents, TranscribedQsMatchGenericExceptQ13) {
  EXPECT_LT(max_diff(q(2, 2), 0.25 * (one(4) - o.l[0] + o.l[1] - o.l[2])), 1e-15);
  for (int a = 1; a <= 3; ++a) {
    for (int b = 1; b <= 3; ++b) {
      if ((a == 1 && b == 3) || (a == 3 && b == 1)) continue;
      EXPECT_LT(max_diff(q(a, b), generic.q(a, b)), 1e-12) << a << b;
    }
  }
}

TEST_F(FourConstituents, TranscribedQ13IsGenericQ31) {
  EXPECT_LT(max_diff(q(1, 3), dagger(q(3, 1))), 1e-15);
  EXPECT_LT(max_diff(q(1, 3), generic.q(3, 1)), 1e-12);
  EXPECT_LT(max_diff(q(3, 1), generic.q(1, 3)), 1e-12);
  EXPECT_NEAR(max_diff(q(1, 3), generic.q(1, 3)), 0.5, 1e-12);
  // Closure picks the other sign.
  EXPECT_GT(max_diff(q(1, 2) * q(2, 3), q(1, 3)), 0.1);
  EXPECT_LT(max_diff(q(1, 2) * q(2, 3), q.q13_closed), 1e-12);
  EXPECT_LT(max_diff(q.q13_closed, generic.q(1, 3)), 1e-12);
}

TEST_F(FourConstituents, ClosedQFamilyIsAMatrixUnitAlgebra) {
  std::vector<std::vector<CMatrix>> fam(3, std::vector<CMatrix>(3));
  for (int a = 1; a <= 3; ++a) {
    for (int b = 1; b <= 3; ++b) fam[a - 1][b - 1] = q(a, b);
  }
  fam[0][2] = q.q13_closed;
  fam[2][0] = dagger(q.q13_closed);
  EXPECT_LT(q_algebra_defect(fam, 4), 1e-12);
}

TEST_F(FourConstituents, Hws) {
  const N4Hws h = n4_hws();
  const HwsPair g = build_hws(generic);
  const CMatrix& p = generic.sector_projector();
  EXPECT_LT(max_diff(h.v3, g.v), 1e-12);
  EXPECT_LT(max_diff(h.v3, q(1, 2) + q(2, 3) + dagger(q.q13_closed)), 1e-12);
  EXPECT_LT(max_diff(h.u3_unitary, g.u), 1e-12);
  // The transcribed K coefficient is twice the generic one.
  EXPECT_NEAR(max_diff(h.u3, g.u), 0.4330127018922193, 1e-12);
  EXPECT_GT(max_diff(h.u3.adjoint() * h.u3, p), 0.1);
  HwsPair corrected{3, h.u3_unitary, h.v3, root_of_unity(3, 1)};
  const HwsResiduals r = hws_residuals(corrected, p);
  EXPECT_LT(r.u_period, 1e-10);
  EXPECT_LT(r.v_period, 1e-10);
  EXPECT_LT(r.commutation, 1e-10);
  EXPECT_LT(max_diff(h.u3_unitary * h.v3, root_of_unity(3, -1) * h.v3 * h.u3_unitary), 1e-10);
}

TEST_F(FourConstituents, SingletLayer) {
  const SpinRegister reg(4);
  const N4SingletLayer s = n4_singlet_layer();
  const std::array<CVector, 2> sym = symmetric_singlets(reg);
  const std::array<CVector, 2> cg = cg_singlets(reg);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_LT(max_diff(s.symmetric_proj[l], sym[l] * sym[l].adjoint()), 1e-12);
  }
  EXPECT_LT(max_diff(s.identity_j0, s.symmetric_proj[0] + s.symmetric_proj[1]), 1e-12);
  // Labels in the successive-coupling projector display are interchanged.
  EXPECT_LT(max_diff(s.cg_proj[1], cg[0] * cg[0].adjoint()), 1e-12);
  EXPECT_LT(max_diff(s.cg_proj[0], cg[1] * cg[1].adjoint()), 1e-12);
  EXPECT_GT(max_diff(s.cg_proj[0], cg[0] * cg[0].adjoint()), 0.1);
  EXPECT_LT(pauli_algebra_defect(s.x, s.y, s.z, s.identity_j0), 1e-10);
  EXPECT_LT(max_diff(commutator(s.x, s.y), 2.0 * kI * s.z), 1e-10);
}

TEST_F(FourConstituents, PermutationContrast) {
  const SpinRegister reg(4);
  const N4SingletLayer s = n4_singlet_layer();
  double worst_sym = 0.0, best_escape = 0.0;
  for (const Permutation& perm : Permutation::all(4)) {
    const CMatrix w = permutation_operator(reg, perm);
    const CMatrix a = w * s.symmetric_proj[0] * w.adjoint();
    worst_sym = std::max(worst_sym, std::min(max_diff(a, s.symmetric_proj[0]),
                                             max_diff(a, s.symmetric_proj[1])));
    const CMatrix c = w * s.cg_proj[1] * w.adjoint();
    best_escape = std::max(best_escape,
                           std::min(max_diff(c, s.cg_proj[0]), max_diff(c, s.cg_proj[1])));
  }
  EXPECT_LT(worst_sym, 1e-10);
  EXPECT_GT(best_escape, 1e-3);
}

TEST(Reduction, ConstantIsOneHalfForEveryConstituent) {
  const ReductionReport r = n4_to_n3_reduction();
  ASSERT_EQ(r.lines.size(), 4u);
  EXPECT_TRUE(r.consistent);
  EXPECT_NEAR(r.constant, 0.5, 1e-12);
  EXPECT_LT(r.max_residual, 1e-10);
  for (const ReductionLine& line : r.lines) {
    for (double c : line.constants) EXPECT_NEAR(c, 0.5, 1e-12);
  }
}

TEST(Reduction, ReportsInconsistencyWithoutThrowing) {
  const N4SingletLayer four = n4_singlet_layer();
  const N3Pauli three = n3_pauli();
  // Mismatched components: x against y.
  const ReductionReport r =
      n4_to_n3_reduction({four.x, four.y, four.z}, {three.y(), three.x(), three.z()});
  EXPECT_FALSE(r.consistent);
  EXPECT_GT(r.max_residual, 1e-3);
}

TEST(ReferenceCases, AllIdsResolve) {
  for (const std::string& id : case_ids()) {
    const ReferenceCase c = reference_case(id);
    EXPECT_FALSE(c.matrices.empty()) << id;
    for (const NamedMatrix& m : c.matrices) EXPECT_FALSE(m.formula.empty()) << id << m.name;
  }
  EXPECT_EQ(reference_case("n3-pauli").matrices.size(), 3u);
  EXPECT_EQ(reference_case("n3-pauli").at("sigma_x").rows(), 8);
  EXPECT_NO_THROW(reference_case("n4-hws").at("U3"));
  EXPECT_NO_THROW(reference_case("n4-hws").at("V3"));
}

TEST(ReferenceCases, UnknownIdListsValidOnes) {
  try {
    reference_case("bogus");
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("n4-hws"), std::string::npos);
  }
}

}  // namespace
}  // namespace rffq
