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

#include <functional>
#include <vector>

#include "malab/grid.hpp"
#include "malab/ma_solver.hpp"

namespace malab {

/// Uniform samples of a convex function on [x0, x0 + (n-1) h].
struct ConvexProfile {
  double x0 = 0.0;
  double h = 0.0;
  std::vector<double> values;
  /// min second difference quotient (strict convexity iff > 0)
  double margin = 0.0;

  double x(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * h; }
  double first_slope() const { return (values[1] - values[0]) / h; }
  double last_slope() const {
    const std::size_t n = values.size();
    return (values[n - 1] - values[n - 2]) / h;
  }
};

/// Computes the margin; with `strict` set, throws Error(NonConvex) unless it
/// is positive. Transformed samples are only convex (piecewise-linear duals
/// have flat second differences), so those are built with strict = false.
ConvexProfile make_profile(double x0, double h, std::vector<double> values, bool strict = true);

/// max_i (p x_i - psi_i), i.e. the conjugate of the piecewise-linear
/// interpolant, by binary search over the monotone slopes.
double conjugate_at(const ConvexProfile& profile, double p);

/// Discrete Legendre-Fenchel transform sampled on the slope range of the
/// input with the same sample count (linear-time monotone-slope sweep).
ConvexProfile legendre_transform(const ConvexProfile& profile);

using Periodic1d = std::function<double(double)>;

struct ToricOracleOptions {
  int samples_per_period = 2048;
};

/// Torus-invariant geodesic between x-only potentials: the duals of
/// 2x^2 + phi interpolate linearly in t. Returns phi_t at the query points
/// (central period). Throws Error(NonConvex) if 2x^2 + phi_i is not strictly
/// convex.
std::vector<double> toric_geodesic_oracle(const Periodic1d& phi0, const Periodic1d& phi1, double t,
                                          const std::vector<double>& xs,
                                          const ToricOracleOptions& opt = {});

/// The oracle path sampled on a grid (broadcast in y).
ScalarField toric_oracle_field(const Periodic1d& phi0, const Periodic1d& phi1, const GridSpec& grid,
                               const ToricOracleOptions& opt = {});

/// sup over interior nodes of |slot determinant| of a field; the degenerate
/// equation's discrete residual used to validate the oracle.
double degenerate_residual(const ScalarField& psi);

/// Trigonometric interpolant of 1-periodic samples on x_i = i/n.
Periodic1d trig_interpolant(std::vector<double> samples);

/// Psi(xi) = eps (e^{2 xi} - 1 - (e^2 - 1) xi), broadcast over x, y.
ScalarField trivial_eps_solution(const GridSpec& grid, double eps);

/// Analytic space-time potential with its second derivatives, used to
/// manufacture right-hand sides.
struct ManufacturedSolution {
  std::function<double(double, double, double)> value;
  std::function<double(double, double, double)> dxx, dyy, dtt, dxt, dyt;
};

/// Psi* = 2 xi^2 + amplitude cos(2 pi x) sin(pi xi).
ManufacturedSolution standard_manufactured(double amplitude = 0.1);

/// Continuum slot determinant of the analytic solution at every node.
/// Throws Error(Inadmissible) if a <= 0 or det <= 0 at an interior node.
Density manufactured_rhs(const ManufacturedSolution& m, const GridSpec& grid);

/// Discrete slot determinant of a sampled field (its exact discrete rhs).
Density manufactured_rhs(const ScalarField& psi_true);

struct SliceDistance {
  int k = 0;
  double sup = 0.0;
  double l2 = 0.0;
};

struct FieldComparison {
  double sup = 0.0;
  double l2 = 0.0;
  /// sup of the Euclidean norm of the difference of discrete gradients
  double c1 = 0.0;
  std::vector<SliceDistance> slices;
};

FieldComparison compare_fields(const ScalarField& f, const ScalarField& g);

}  // namespace malab
