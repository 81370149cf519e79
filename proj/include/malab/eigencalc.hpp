// Copyright 2026 The malab Authors.
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

#include <array>
#include <complex>
#include <vector>

#include "malab/sym_matrix.hpp"

namespace malab {

/// Ordered eigenpairs: lambdas[0] >= lambdas[1] >= ...; vectors[a] is the
/// unit eigenvector for lambdas[a].
struct EigenSystem {
  int n = 0;
  Vec4 lambdas{};
  std::array<Vec4, 4> vectors{};

  double gap() const noexcept { return lambdas[0] - lambdas[1]; }
};

/// Eigenvalues closer than this are treated as tied for ordering purposes.
inline constexpr double kTieTolerance = 1e-10;
/// Minimum lambda1 - lambda2 for the derivative formulas.
inline constexpr double kSimpleGap = 1e-8;

/// Closed form for n = 2, cyclic Jacobi rotations for n = 3, 4. Ties are
/// ordered by lexicographically largest absolute components and each vector
/// has its first nonzero component positive.
EigenSystem eigen_decompose(const SymMatrix& s);

/// B = I - V1 V1^T.
SymMatrix perturbation_B(const Vec4& v1, int n);

/// Phi = H - B in the flat chart (metric is the identity).
SymMatrix phi_endomorphism(const SymMatrix& h, const SymMatrix& b);

/// d lambda1 / d S_ab = V1_a V1_b.
SymMatrix d_lambda1(const EigenSystem& e);

/// Second derivative of lambda1 contracted against directions P and Q:
/// sum_{mu>1} [(V1'P Vmu)(Vmu'Q V1) + (Vmu'P V1)(V1'Q Vmu)] / (l1 - lmu).
double d2_lambda1(const EigenSystem& e, const SymMatrix& p, const SymMatrix& q);

struct HFunState {
  double s = 0.0;
  double s_max = 0.0;
};

struct HValues {
  double h = 0.0;
  double dh = 0.0;
  double d2h = 0.0;
};

/// h(s) = -1/2 log(1 + s_max - s) and its first two derivatives.
HValues h_eval(const HFunState& st);

/// Quantities attached to the top eigenvector under the chart complex
/// structure J (J e_{2q} = e_{2q+1}); requires n in {2, 4}.
struct LemmaVectors {
  Vec4 jv1{};
  /// mu[a] = <J V1, V_a> for a >= 1 (mu[0] is unused and zero).
  Vec4 mu{};
  /// W1 = (V1 - i J V1)/sqrt(2) written as sum nu_q d_q with g-unit d_q.
  std::array<std::complex<double>, 2> nu{};
  /// 1 + (phi_{V1V1} + phi_{JV1 JV1})/2, the value of g~(W1, conj W1).
  double w1_norm = 0.0;
};

LemmaVectors lemma_vectors(const EigenSystem& e);

}  // namespace malab
