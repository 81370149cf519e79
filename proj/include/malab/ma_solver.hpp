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

#include <optional>
#include <string>
#include <vector>

#include "malab/grid.hpp"
#include "malab/error.hpp"
#include "malab/krylov.hpp"
#include "malab/stencil.hpp"

namespace malab {

/// Right-hand-side density per node; only interior xi-layers are read.
using Density = ScalarField;

struct NewtonConfig {
  double tol_res = 1e-9;
  int max_outer = 50;
  double armijo_factor = 0.5;
  double armijo_slope = 1e-4;
  double linear_tol = 1e-8;
  int linear_max = 2000;
  int gmres_restart = 60;
  double min_step = 1e-12;
  PreconditionerKind preconditioner = PreconditionerKind::Ilu0;
  /// Accept convergence at the estimated floating-point floor of the
  /// log-determinant residual when it exceeds tol_res.
  bool accept_rounding_floor = true;

  void validate() const;
};

struct SolveReport {
  int outer_iters = 0;
  std::vector<double> residual_history;
  std::vector<double> step_lengths;
  std::vector<int> linear_iter_counts;
  double min_admissibility = 0.0;
  double residual_floor = 0.0;
  double wall_time = 0.0;
};

struct AdmissibilityResult {
  bool admissible = false;
  double min_det = 0.0;
  Node worst_node;
};

/// r = log(det slot) - log(rhs) on interior nodes, zero on the xi layers.
/// Throws Error(Inadmissible) naming the node and slot values.
ScalarField residual_log(const ScalarField& psi, const Density& rhs);

/// Action of the Jacobian of residual_log at psi on delta:
/// tr(M^{-1} dM(delta)) per interior node. Values of delta on the xi layers
/// are ignored (Dirichlet).
ScalarField linearize_apply(const ScalarField& psi, const ScalarField& delta);

/// Assembled Jacobian over interior unknowns (row order = interior node
/// order, x fastest then y then xi starting at k=1).
CsrMatrix assemble_jacobian(const ScalarField& psi);

AdmissibilityResult admissibility_check(const ScalarField& psi);

struct SolveResult {
  ScalarField psi;
  SolveReport report;
};

/// Damped inexact Newton on the log-determinant residual. Boundary layers of
/// psi0 are kept bit-exact. Throws Error(MaxIterations | LineSearch |
/// Inadmissible); the partial report is attached to the message.
SolveResult newton_solve(const ScalarField& psi0, const Density& rhs, const NewtonConfig& cfg);

/// Density eps * exp(2 xi) on the grid.
Density geodesic_density(const GridSpec& grid, double eps);

struct EpsSolution {
  double eps = 0.0;
  ScalarField psi;
  SolveReport report;
};

struct SweepFailure {
  double eps = 0.0;
  ErrorCode code = ErrorCode::MaxIterations;
  std::string message;
};

struct SweepResult {
  std::vector<EpsSolution> solutions;
  std::optional<SweepFailure> failure;
  bool ok() const noexcept { return !failure; }
};

/// Warm-started decreasing-eps continuation. Stops at the first failure and
/// returns the completed prefix. `rhs_for` maps eps to the density.
template <class RhsFor>
SweepResult continuity_sweep(const ScalarField& psi0, const std::vector<double>& schedule,
                             RhsFor&& rhs_for, const NewtonConfig& cfg);

void validate_schedule(const std::vector<double>& schedule);

}  // namespace malab

#include "malab/detail/continuity_sweep.ipp"
