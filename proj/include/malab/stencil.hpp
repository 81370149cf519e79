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

#include <complex>

#include "malab/grid.hpp"
#include "malab/sym_matrix.hpp"

namespace malab {

enum class Axis { X = 0, Y = 1, T = 2 };

/// Centered second difference in (a, b). Mixed pairs use the 4-point cross
/// stencil. Periodic in x, y; any pair involving T needs 1 <= k <= nt-2.
double second_diff(const ScalarField& f, const Node& n, Axis a, Axis b);

/// Centered first difference; second-order one-sided at the xi layers.
double first_diff(const ScalarField& f, const Node& n, Axis a);

/// Complex Hessian of the space-time potential relative to the flat
/// reference in the reduced chart: [[a, b], [conj(b), c]].
struct HermitianSlot {
  double a = 1.0;
  std::complex<double> b{0.0, 0.0};
  double c = 0.0;

  double det() const noexcept { return a * c - std::norm(b); }
  bool admissible() const noexcept { return a > 0.0 && det() > 0.0; }
  double trace() const noexcept { return a + c; }
};

/// a = 1 + (f_xx + f_yy)/4, b = (f_xt - i f_yt)/4, c = f_tt/4.
HermitianSlot complex_hessian(const ScalarField& f, const Node& n);

/// 3x3 chart Hessian over (x, y, xi). The eta direction is identically zero
/// by rotation invariance and is omitted.
SymMatrix real_hessian(const ScalarField& f, const Node& n);

/// |df|^2 = (f_x^2 + f_y^2 + f_t^2) / 2.
double grad_norm_sq(const ScalarField& f, const Node& n);

struct Gradient {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};
Gradient gradient(const ScalarField& f, const Node& n);

/// 1 + Laplacian/4 of a torus slice at (i, j); the Kahler margin density.
double slice_margin(const SliceField& s, double hx, double hy, int i, int j);
/// min over the slice of 1 + Laplacian/4.
double min_slice_margin(const SliceField& s, double hx, double hy);

}  // namespace malab
