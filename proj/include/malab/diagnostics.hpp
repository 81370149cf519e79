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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "malab/grid.hpp"

namespace malab {

struct EigenField {
  /// lambda1 of the chart Hessian at interior nodes, NaN on the xi layers
  ScalarField lambda1;
  double max = 0.0;
  Node argmax;
};

EigenField hessian_eigen_field(const ScalarField& psi);

/// Largest Rayleigh quotient of the chart Hessian over the 26 lattice
/// directions (13 up to sign); a lower bound for lambda1.
double probe_lambda_max(const ScalarField& psi, const Node& n);

struct QFieldConfig {
  double A = 3.0;
  void validate() const;
};

struct QFieldResult {
  /// Q at evaluated nodes, NaN where lambda1 <= 0 or on the xi layers
  ScalarField q;
  double sup = 0.0;
  Node argmax;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;
  bool empty_domain() const noexcept { return evaluated == 0; }
};

/// Q = log lambda1 + h(|dPsi|^2) - A (Psi - max Psi) on {lambda1 > 0}.
QFieldResult q_field(const ScalarField& psi, const QFieldConfig& cfg);

inline constexpr double kPlateauSlope = 0.05;
inline constexpr double kPlateauChange = 0.10;

struct PlateauRow {
  double eps = 0.0;
  double value = 0.0;
};

struct PlateauVerdict {
  double slope = 0.0;
  double scale = 0.0;
  double last_change = 0.0;
  bool pass = false;
};

/// Least-squares slope of value against log(1/eps) over the last three rows
/// and the relative growth between the last two. PASS iff
/// slope <= 0.05 scale and growth <= 10%, with scale the largest |value| of
/// the three rows.
PlateauVerdict plateau_test(const std::vector<PlateauRow>& rows);

struct HolderOptions {
  int near_radius = 4;
  int far_pairs = 10000;
  std::uint64_t seed = 0x5eed2026ULL;
};

/// max |grad(p) - grad(q)| / dist(p,q)^alpha over every pair within
/// near_radius grid steps plus far_pairs random pairs (fixed seed).
double holder_seminorm(const ScalarField& psi, double alpha, const HolderOptions& opt = {});

struct HessianBoundCheck {
  double max_entry = 0.0;
  double sup_lambda1 = 0.0;
  double constant = 0.0;
  bool pass = false;
};

/// max |Hessian entry| <= C sup lambda1 + C with C = 2 (1 + max slot trace).
HessianBoundCheck hessian_bound_check(const ScalarField& psi);

struct DiagnosticsRow {
  double eps = 0.0;
  double sup_psi = 0.0;
  double sup_grad = 0.0;
  double sup_lap = 0.0;
  double sup_lambda1 = 0.0;
  double min_det = 0.0;
  double max_det = 0.0;
  double sup_q = 0.0;
  double speed_var = 0.0;
  double holder = 0.0;
  Node q_argmax;
};

struct DiagnosticsConfig {
  QFieldConfig q;
  double alpha = 0.5;
};

DiagnosticsRow diagnostics_row(double eps, const ScalarField& psi, const DiagnosticsConfig& cfg);

struct Verdict {
  std::string check;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct DiagnosticsReport {
  std::vector<DiagnosticsRow> rows;
  std::vector<Verdict> verdicts;
  bool all_pass() const noexcept;
};

/// Plateau verdicts on sup lambda1 and the Holder surrogate, plus the
/// degeneration checks min_det / eps and max_det / (eps e^2) in [1/2, 2].
std::vector<Verdict> standard_verdicts(const std::vector<DiagnosticsRow>& rows);

/// Fixed column order: eps, sup_psi, sup_grad, sup_lap, sup_lambda1,
/// min_det, sup_Q, speed_var, holder.
void write_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows);

std::string format_double(double v);

}  // namespace malab
