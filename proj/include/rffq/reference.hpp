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

// Closed-form swap/singlet expressions for three and four constituents.
//
// These are literal transcriptions built only from spinsys primitives
// (P_jk, S_jk, sigma). They must not include coupling.hpp or encoder.hpp:
// they serve as an oracle for the generic construction.
//
// Conventions of the transcribed expressions, as found by comparing with
// the generic pipeline:
//  * The three-constituent set uses the conjugate phase convention: it equals
//    the generic set built with CouplingMatrix::conjugate_fourier(3), i.e.
//    the default Fourier set with lambda = 1, 2 exchanged.
//  * The four-constituent Q13 expression equals the generic Q31; the
//    expression satisfying Q12 Q23 = Q13 is kept alongside as q13_closed.
//  * The four-constituent U3 expression is not unitary on the sector; the
//    K coefficient sqrt(3) i must be sqrt(3) i / 2. Both are kept.
//  * The two successive-coupling singlet projector expressions are the
//    projectors onto |S2> and |S1> respectively (labels exchanged).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rffq/error.hpp"
#include "rffq/linalg.hpp"
#include "rffq/spinsys.hpp"

namespace rffq::reference {

struct NamedMatrix {
  std::string name;
  std::string formula;
  CMatrix value;
};

struct ReferenceCase {
  std::string id;
  std::vector<NamedMatrix> matrices;

  const CMatrix& at(const std::string& name) const {
    for (const NamedMatrix& m : matrices) {
      if (m.name == name) return m.value;
    }
    throw ContractError("reference case " + id + " has no matrix " + name);
  }
};

inline constexpr double kTranscriptionTolerance = 1e-12;

namespace detail {

inline void require_equal(const CMatrix& a, const CMatrix& b,
                          const std::string& what) {
  const double r = max_diff(a, b);
  if (r > kTranscriptionTolerance) {
    std::ostringstream os;
    os << "transcription mismatch: " << what << " (residual " << r << ")";
    throw ConsistencyError(os.str());
  }
}

/// Pairwise swaps / singlets of an n-constituent register, 1-based.
class PairTable {
 public:
  PairTable(int n, bool singlets) : reg_(n) {
    for (int j = 1; j <= n; ++j) {
      for (int k = j + 1; k <= n; ++k) {
        table_[{j, k}] = singlets ? singlet_projector(reg_, j, k) : swap(reg_, j, k);
      }
    }
  }
  const CMatrix& operator()(int j, int k) const {
    return table_.at({std::min(j, k), std::max(j, k)});
  }
  const SpinRegister& reg() const { return reg_; }
  CMatrix one() const { return CMatrix::Identity(reg_.dim(), reg_.dim()); }

 private:
  SpinRegister reg_;
  std::map<std::pair<int, int>, CMatrix> table_;
};

inline Complex w3(int k) { return root_of_unity(3, k); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Three constituents

struct N3QOperators {
  CMatrix q12, q21, q11, q22;
};

inline N3QOperators n3_q_operators() {
  const detail::PairTable p(3, false);
  const CMatrix one = p.one();
  N3QOperators q;
  // Q12 = (P12 + w3 P23 + w3^2 P31) / 3
  q.q12 = (p(1, 2) + detail::w3(1) * p(2, 3) + detail::w3(2) * p(3, 1)) / 3.0;
  q.q21 = dagger(q.q12);
  // Q11, Q22 = 1/2 - (P12 + P23 + P31)/6 -/+ (i/sqrt12) [P31, P12]
  const CMatrix common = 0.5 * one - (p(1, 2) + p(2, 3) + p(3, 1)) / 6.0;
  const CMatrix comm = commutator(p(3, 1), p(1, 2));
  q.q11 = common - kI / std::sqrt(12.0) * comm;
  q.q22 = common + kI / std::sqrt(12.0) * comm;
  return q;
}

struct N3Pauli {
  CMatrix x_swap, x_dot;
  CMatrix y_swap, y_dot;
  CMatrix z_commutator, z_triple;

  const CMatrix& x() const { return x_swap; }
  const CMatrix& y() const { return y_swap; }
  const CMatrix& z() const { return z_commutator; }
};

/// (sigma^(a) x sigma^(b)) . sigma^(c)
inline CMatrix triple_product(const SpinRegister& reg, int a, int b, int c) {
  const std::array<Pauli, 3> axes{Pauli::x, Pauli::y, Pauli::z};
  CMatrix out = CMatrix::Zero(reg.dim(), reg.dim());
  // Levi-Civita over (i, j, k)
  const int perms[6][4] = {{0, 1, 2, 1},  {1, 2, 0, 1},  {2, 0, 1, 1},
                           {0, 2, 1, -1}, {2, 1, 0, -1}, {1, 0, 2, -1}};
  for (const auto& p : perms) {
    out += static_cast<double>(p[3]) * sigma(reg, a, axes[p[0]]) *
           sigma(reg, b, axes[p[1]]) * sigma(reg, c, axes[p[2]]);
  }
  return out;
}

/// Logical Pauli vector of the three-constituent qubit in every written
/// form; throws if the forms disagree.
inline N3Pauli n3_pauli() {
  const detail::PairTable p(3, false);
  const SpinRegister& reg = p.reg();
  const auto dot = [&](int j, int k) { return sigma_dot(reg, j, k); };
  N3Pauli s;
  s.x_swap = (2.0 * p(1, 2) - p(2, 3) - p(3, 1)) / 3.0;
  s.x_dot = (2.0 * dot(1, 2) - dot(2, 3) - dot(3, 1)) / 6.0;
  s.y_swap = (p(2, 3) - p(3, 1)) / std::sqrt(3.0);
  s.y_dot = (dot(2, 3) - dot(3, 1)) / std::sqrt(12.0);
  s.z_commutator = -kI / std::sqrt(3.0) * commutator(p(3, 1), p(1, 2));
  s.z_triple = -triple_product(reg, 1, 2, 3) / std::sqrt(12.0);
  detail::require_equal(s.x_swap, s.x_dot, "sigma_x swap vs dot form");
  detail::require_equal(s.y_swap, s.y_dot, "sigma_y swap vs dot form");
  detail::require_equal(s.z_commutator, s.z_triple,
                        "sigma_z commutator vs triple-product form");
  return s;
}

/// I_{j=1/2} = 1 - (P12 + P23 + P31)/3, checked against
/// (3 - s1.s2 - s2.s3 - s3.s1)/6.
inline CMatrix n3_sector_projector() {
  const detail::PairTable p(3, false);
  const SpinRegister& reg = p.reg();
  const CMatrix proj = p.one() - (p(1, 2) + p(2, 3) + p(3, 1)) / 3.0;
  const CMatrix dot_form = (3.0 * p.one() - sigma_dot(reg, 1, 2) -
                            sigma_dot(reg, 2, 3) - sigma_dot(reg, 3, 1)) /
                           6.0;
  detail::require_equal(proj, dot_form, "I_{j=1/2} swap vs dot form");
  return proj;
}

struct N3Trine {
  std::array<CMatrix, 3> rho;      // (1 - P23)/2, (1 - P31)/2, (1 - P12)/2
  std::array<CMatrix, 3> logical;  // 2x2 signal states
};

/// Trine states. rho_k has trace 2 (one unit per idler level); the logical
/// forms are read off with the transcribed Q operators,
/// logical[a,b] = Tr(Q_ba rho) / Tr(rho).
inline N3Trine n3_trine() {
  const detail::PairTable p(3, false);
  const N3QOperators q = n3_q_operators();
  N3Trine t;
  t.rho[0] = 0.5 * (p.one() - p(2, 3));
  t.rho[1] = 0.5 * (p.one() - p(3, 1));
  t.rho[2] = 0.5 * (p.one() - p(1, 2));
  const std::array<std::array<const CMatrix*, 2>, 2> qm{
      {{&q.q11, &q.q12}, {&q.q21, &q.q22}}};
  for (std::size_t k = 0; k < 3; ++k) {
    const Complex tr = t.rho[k].trace();
    CMatrix logical(2, 2);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        logical(a, b) = (*qm[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] * t.rho[k]).trace() / tr;
      }
    }
    t.logical[k] = logical;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Four constituents

struct N4Akl {
  std::array<CMatrix, 3> a;  // A1..A3
  std::array<CMatrix, 4> k;  // K1..K4
  std::array<CMatrix, 3> l;  // L1..L3

  CMatrix k_sum() const { return k[0] + k[1] + k[2] + k[3]; }
};

inline N4Akl n4_akl() {
  const detail::PairTable p(4, false);
  N4Akl o;
  o.a[0] = p(1, 2) - p(3, 4);
  o.a[1] = p(1, 3) - p(2, 4);
  o.a[2] = p(1, 4) - p(2, 3);
  o.k[0] = kI * commutator(p(2, 3), p(2, 4));
  o.k[1] = kI * commutator(p(3, 4), p(1, 3));
  o.k[2] = kI * commutator(p(1, 4), p(2, 4));
  o.k[3] = kI * commutator(p(1, 2), p(1, 3));
  o.l[0] = p(1, 2) * p(3, 4);
  o.l[1] = p(1, 3) * p(2, 4);
  o.l[2] = p(1, 4) * p(2, 3);
  return o;
}

struct N4QOperators {
  std::array<std::array<CMatrix, 3>, 3> q;  // q[a-1][b-1], as transcribed
  CMatrix q13_closed;  // (A2 - i(L1 - L3))/4, satisfies Q12 Q23 = Q13

  const CMatrix& operator()(int a, int b) const {
    return q.at(static_cast<std::size_t>(a - 1)).at(static_cast<std::size_t>(b - 1));
  }
};

inline N4QOperators n4_q_operators() {
  const N4Akl o = n4_akl();
  const CMatrix one = CMatrix::Identity(16, 16);
  const CMatrix ks = o.k_sum();
  const auto& A = o.a;
  const auto& K = o.k;
  const auto& L = o.l;
  const Complex one_plus_i(1.0, 1.0);
  const Complex one_minus_i(1.0, -1.0);
  N4QOperators r;
  r.q[0][0] = 0.25 * (one - 0.5 * ks - L[1]);
  r.q[1][1] = 0.25 * (one - L[0] + L[1] - L[2]);
  r.q[2][2] = 0.25 * (one + 0.5 * ks - L[1]);
  r.q[0][1] = 0.125 * (one_plus_i * A[0] - one_minus_i * A[2] -
                       kI * (K[0] - K[2]) - (K[1] - K[3]));
  r.q[1][2] = 0.125 * (one_plus_i * A[0] - one_minus_i * A[2] +
                       kI * (K[0] - K[2]) + (K[1] - K[3]));
  r.q[0][2] = 0.25 * (A[1] + kI * (L[0] - L[2]));
  r.q[1][0] = dagger(r.q[0][1]);
  r.q[2][1] = dagger(r.q[1][2]);
  r.q[2][0] = dagger(r.q[0][2]);
  r.q13_closed = 0.25 * (A[1] - kI * (L[0] - L[2]));
  return r;
}

struct N4Hws {
  CMatrix u3;          // as transcribed
  CMatrix v3;          // as transcribed
  CMatrix u3_unitary;  // K coefficient sqrt(3) i / 2
};

inline N4Hws n4_hws() {
  const N4Akl o = n4_akl();
  const CMatrix ks = o.k_sum();
  const auto& A = o.a;
  const auto& L = o.l;
  const Complex w2 = detail::w3(2);
  N4Hws h;
  h.u3 = w2 / 4.0 * (-L[0] + 2.0 * L[1] - L[2] + std::sqrt(3.0) * kI * ks);
  h.v3 = 0.25 * (kI * (L[0] - L[2]) + Complex(1.0, 1.0) * A[0] + A[1] -
                 Complex(1.0, -1.0) * A[2]);
  h.u3_unitary =
      w2 / 4.0 * (-L[0] + 2.0 * L[1] - L[2] + std::sqrt(3.0) / 2.0 * kI * ks);
  return h;
}

struct N4SingletLayer {
  std::array<CMatrix, 2> symmetric_proj;  // |0,0;lambda><0,0;lambda|
  std::array<CMatrix, 2> cg_proj;         // the two successive-coupling forms
  CMatrix x, y, z;                        // logical Paulis on j = 0
  CMatrix identity_j0;
};

inline N4SingletLayer n4_singlet_layer() {
  const detail::PairTable s(4, true);
  N4SingletLayer out;
  const CMatrix pairings = s(1, 2) * s(3, 4) + s(1, 3) * s(2, 4) + s(1, 4) * s(2, 3);
  const CMatrix chain = commutator(s(1, 2), s(1, 3)) - commutator(s(2, 3), s(2, 4)) +
                        commutator(s(3, 4), s(3, 1)) - commutator(s(4, 1), s(4, 2));
  for (int lambda = 1; lambda <= 2; ++lambda) {
    const double sign = lambda % 2 == 0 ? 1.0 : -1.0;  // (-1)^lambda
    out.symmetric_proj[static_cast<std::size_t>(lambda - 1)] =
        pairings / 3.0 + kI * sign / std::sqrt(12.0) * chain;
  }
  out.cg_proj[0] =
      (-s(1, 2) * s(3, 4) + 2.0 * s(1, 3) * s(2, 4) + 2.0 * s(1, 4) * s(2, 3)) / 3.0;
  out.cg_proj[1] = s(1, 2) * s(3, 4);
  out.x = -2.0 / 3.0 * (2.0 * s(1, 2) * s(3, 4) - s(1, 4) * s(2, 3) - s(1, 3) * s(2, 4));
  out.y = -2.0 / std::sqrt(3.0) * (s(1, 3) * s(2, 4) - s(1, 4) * s(2, 3));
  out.z = -kI / std::sqrt(3.0) * chain;
  out.identity_j0 = 2.0 / 3.0 * pairings;
  return out;
}

// ---------------------------------------------------------------------------
// Four-to-three reduction of the singlet-sector Paulis

struct ReductionLine {
  int traced = 0;                    // constituent traced out, 1..4
  std::array<int, 3> relabeling{};   // remaining position i -> 3-qubit label
  std::array<double, 3> constants{}; // per component (x, y, z)
  double constant = 0.0;             // common constant
  double residual = 0.0;             // max_a |Tr_l(s4_a) - c W s3_a W^dagger|
};

struct ReductionReport {
  std::vector<ReductionLine> lines;
  double constant = 0.0;      // shared by every line when consistent
  double max_residual = 0.0;
  double constant_spread = 0.0;
  bool consistent = false;
};

/// Traces each four-constituent Pauli over every constituent and fits
/// Tr_l(s4_a) = c W s3_a W^dagger over all relabelings W of the remaining
/// three constituents, keeping the best fit per traced constituent.
inline ReductionReport n4_to_n3_reduction(
    const std::array<CMatrix, 3>& four, const std::array<CMatrix, 3>& three,
    double tol = kDefaultTolerance) {
  const SpinRegister reg3(3);
  ReductionReport report;
  double cmin = std::numeric_limits<double>::infinity();
  double cmax = -std::numeric_limits<double>::infinity();
  for (int traced = 1; traced <= 4; ++traced) {
    std::array<CMatrix, 3> reduced;
    for (std::size_t a = 0; a < 3; ++a) reduced[a] = partial_trace(four[a], 4, traced);
    ReductionLine best;
    best.traced = traced;
    best.residual = std::numeric_limits<double>::infinity();
    for (const Permutation& perm : Permutation::all(3)) {
      const CMatrix w = permutation_operator(reg3, perm);
      ReductionLine line;
      line.traced = traced;
      for (int i = 0; i < 3; ++i) line.relabeling[static_cast<std::size_t>(i)] = perm(i + 1);
      std::array<CMatrix, 3> target;
      for (std::size_t a = 0; a < 3; ++a) {
        target[a] = w * three[a] * w.adjoint();
        const Complex num = (target[a].adjoint() * reduced[a]).trace();
        const Complex den = (target[a].adjoint() * target[a]).trace();
        line.constants[a] = (num / den).real();
      }
      line.constant = (line.constants[0] + line.constants[1] + line.constants[2]) / 3.0;
      line.residual = 0.0;
      for (std::size_t a = 0; a < 3; ++a) {
        line.residual = std::max(line.residual,
                                 max_abs(reduced[a] - line.constant * target[a]));
      }
      if (line.residual < best.residual) best = line;
    }
    cmin = std::min(cmin, best.constant);
    cmax = std::max(cmax, best.constant);
    report.max_residual = std::max(report.max_residual, best.residual);
    report.lines.push_back(best);
  }
  report.constant = 0.5 * (cmin + cmax);
  report.constant_spread = cmax - cmin;
  report.consistent = report.max_residual <= tol && report.constant_spread <= tol;
  return report;
}

inline ReductionReport n4_to_n3_reduction(double tol = kDefaultTolerance) {
  const N4SingletLayer four = n4_singlet_layer();
  const N3Pauli three = n3_pauli();
  return n4_to_n3_reduction({four.x, four.y, four.z},
                            {three.x(), three.y(), three.z()}, tol);
}

// ---------------------------------------------------------------------------
// Named cases for dumping

inline const std::vector<std::string>& case_ids() {
  static const std::vector<std::string> ids{
      "n3-q",    "n3-pauli", "n3-trine",        "n4-akl",      "n4-q",
      "n4-hws",  "n4-singlet-proj", "n4-cg-proj", "n4-pauli",
      "n4-sector-projectors"};
  return ids;
}

inline ReferenceCase reference_case(const std::string& id) {
  ReferenceCase c{id, {}};
  auto add = [&](std::string name, std::string formula, CMatrix m) {
    c.matrices.push_back({std::move(name), std::move(formula), std::move(m)});
  };
  if (id == "n3-q") {
    const N3QOperators q = n3_q_operators();
    add("Q12", "(P12 + w3 P23 + w3^2 P31)/3", q.q12);
    add("Q21", "Q12^dagger", q.q21);
    add("Q11", "1/2 - (P12 + P23 + P31)/6 - (i/sqrt12)[P31, P12]", q.q11);
    add("Q22", "1/2 - (P12 + P23 + P31)/6 + (i/sqrt12)[P31, P12]", q.q22);
  } else if (id == "n3-pauli") {
    const N3Pauli s = n3_pauli();
    add("sigma_x", "(2 P12 - P23 - P31)/3 = (2 s1.s2 - s2.s3 - s3.s1)/6", s.x());
    add("sigma_y", "(P23 - P31)/sqrt3 = (s2.s3 - s3.s1)/sqrt12", s.y());
    add("sigma_z", "-(i/sqrt3)[P31, P12] = -(s1 x s2).s3/sqrt12", s.z());
  } else if (id == "n3-trine") {
    const N3Trine t = n3_trine();
    add("rho1", "(1 - P23)/2", t.rho[0]);
    add("rho2", "(1 - P31)/2", t.rho[1]);
    add("rho3", "(1 - P12)/2", t.rho[2]);
    add("logical1", "[Tr(Q_ba rho1)/Tr rho1]", t.logical[0]);
    add("logical2", "[Tr(Q_ba rho2)/Tr rho2]", t.logical[1]);
    add("logical3", "[Tr(Q_ba rho3)/Tr rho3]", t.logical[2]);
  } else if (id == "n4-akl") {
    const N4Akl o = n4_akl();
    add("A1", "P12 - P34", o.a[0]);
    add("A2", "P13 - P24", o.a[1]);
    add("A3", "P14 - P23", o.a[2]);
    add("K1", "i[P23, P24]", o.k[0]);
    add("K2", "i[P34, P13]", o.k[1]);
    add("K3", "i[P14, P24]", o.k[2]);
    add("K4", "i[P12, P13]", o.k[3]);
    add("L1", "P12 P34", o.l[0]);
    add("L2", "P13 P24", o.l[1]);
    add("L3", "P14 P23", o.l[2]);
  } else if (id == "n4-q") {
    const N4QOperators q = n4_q_operators();
    add("Q11", "[1 - (K1+K2+K3+K4)/2 - L2]/4", q(1, 1));
    add("Q22", "(1 - L1 + L2 - L3)/4", q(2, 2));
    add("Q33", "[1 + (K1+K2+K3+K4)/2 - L2]/4", q(3, 3));
    add("Q12", "[(1+i)A1 - (1-i)A3 - i(K1-K3) - (K2-K4)]/8", q(1, 2));
    add("Q21", "Q12^dagger", q(2, 1));
    add("Q23", "[(1+i)A1 - (1-i)A3 + i(K1-K3) + (K2-K4)]/8", q(2, 3));
    add("Q32", "Q23^dagger", q(3, 2));
    add("Q13", "[A2 + i(L1-L3)]/4", q(1, 3));
    add("Q31", "Q13^dagger", q(3, 1));
    add("Q13_closed", "[A2 - i(L1-L3)]/4 (satisfies Q12 Q23 = Q13)", q.q13_closed);
  } else if (id == "n4-hws") {
    const N4Hws h = n4_hws();
    add("U3", "(w3^2/4)[-L1 + 2L2 - L3 + sqrt3 i (K1+K2+K3+K4)]", h.u3);
    add("V3", "[i(L1-L3) + (1+i)A1 + A2 - (1-i)A3]/4", h.v3);
    add("U3_unitary", "(w3^2/4)[-L1 + 2L2 - L3 + (sqrt3/2) i (K1+K2+K3+K4)]",
        h.u3_unitary);
  } else if (id == "n4-singlet-proj") {
    const N4SingletLayer s = n4_singlet_layer();
    add("proj_lambda1",
        "(S12S34 + S13S24 + S14S23)/3 - (i/sqrt12)([S12,S13] - [S23,S24] + "
        "[S34,S31] - [S41,S42])",
        s.symmetric_proj[0]);
    add("proj_lambda2",
        "(S12S34 + S13S24 + S14S23)/3 + (i/sqrt12)([S12,S13] - [S23,S24] + "
        "[S34,S31] - [S41,S42])",
        s.symmetric_proj[1]);
  } else if (id == "n4-cg-proj") {
    const N4SingletLayer s = n4_singlet_layer();
    add("proj_S1_formula", "(-S12S34 + 2 S13S24 + 2 S14S23)/3 (projects onto |S2>)",
        s.cg_proj[0]);
    add("proj_S2_formula", "S12S34 (projects onto |S1>)", s.cg_proj[1]);
  } else if (id == "n4-pauli") {
    const N4SingletLayer s = n4_singlet_layer();
    add("sigma_x", "-(2/3)(2 S12S34 - S14S23 - S13S24)", s.x);
    add("sigma_y", "-(2/sqrt3)(S13S24 - S14S23)", s.y);
    add("sigma_z", "-(i/sqrt3)([S12,S13] - [S23,S24] + [S34,S31] - [S41,S42])", s.z);
  } else if (id == "n4-sector-projectors") {
    const N4SingletLayer s = n4_singlet_layer();
    const N4QOperators q = n4_q_operators();
    add("I_j1", "Q11 + Q22 + Q33", q(1, 1) + q(2, 2) + q(3, 3));
    add("I_j0", "(2/3)(S12S34 + S13S24 + S14S23)", s.identity_j0);
  } else {
    std::ostringstream os;
    os << "unknown reference case '" << id << "'; valid ids:";
    for (const std::string& v : case_ids()) os << ' ' << v;
    throw ContractError(os.str());
  }
  return c;
}

}  // namespace rffq::reference
