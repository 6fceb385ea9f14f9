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

// Seeded generators for logical states, POVMs and rotation axes.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rffq/encoder.hpp"
#include "rffq/linalg.hpp"
#include "rffq/spinsys.hpp"

namespace rffq {

/// Independent generator for item `index` of a stream seeded by `seed`.
inline Rng derived_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) g(r, c) = Complex(normal(rng), normal(rng));
  }
  return g;
}

/// Mixed state G G^dagger / Tr with G a d x rank Ginibre matrix.
inline QuditState random_density(int d, Rng& rng, int rank = -1) {
  if (rank < 1) rank = d;
  const CMatrix g = ginibre(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QuditState::from_matrix(rho);
}

inline QuditState random_pure_state(int d, Rng& rng) {
  return random_density(d, rng, 1);
}

/// K-outcome POVM: Pi_k = S^{-1/2} A_k S^{-1/2} with A_k = G_k G_k^dagger
/// and S = sum A_k.
inline QuditPovm random_povm(int d, int outcomes, Rng& rng) {
  std::vector<CMatrix> a;
  CMatrix s = CMatrix::Zero(d, d);
  for (int k = 0; k < outcomes; ++k) {
    const CMatrix g = ginibre(d, d, rng);
    a.push_back(g * g.adjoint());
    s += a.back();
  }
  const HermitianEigen eig = hermitian_eig(0.5 * (s + s.adjoint()));
  const RVector inv_root = eig.values.cwiseSqrt().cwiseInverse();
  const CMatrix s_inv_half =
      eig.vectors * inv_root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  for (CMatrix& e : a) {
    e = s_inv_half * e * s_inv_half;
    e = 0.5 * (e + e.adjoint()).eval();
  }
  return QuditPovm::from_elements(std::move(a));
}

inline Axis3 random_unit_axis(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Axis3 v{normal(rng), normal(rng), normal(rng)};
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace rffq
