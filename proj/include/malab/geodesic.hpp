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

/// Two Kahler potentials on the torus grid and their margins
/// m_i = min(1 + Laplacian(phi_i)/4).
struct PotentialPair {
  SliceField phi0;
  SliceField phi1;
  double m0 = 0.0;
  double m1 = 0.0;
};

/// Throws Error(Inadmissible) when either margin is not positive.
PotentialPair make_potential_pair(const GridSpec& grid, SliceField phi0, SliceField phi1);

struct EpsProblem {
  PotentialPair pair;
  GridSpec grid;
  std::vector<double> schedule;
  double k_min = 0.0;
  double k_init = 0.0;

  /// eps * exp(2 xi)
  Density rhs(double eps) const { return geodesic_density(grid, eps); }
};

/// Dirichlet data phi0 at xi=0 and phi1 at xi=1; picks k so that
/// (1-xi) phi0 + xi phi1 + k xi (xi-1) has slot determinant at least
/// eps_first e^{2 xi} / 2 at every node.
EpsProblem build_problem(const PotentialPair& pair, const GridSpec& grid,
                         std::vector<double> schedule);

ScalarField initial_guess(const EpsProblem& problem);

using EpsObserver = std::function<void(const EpsSolution&)>;

/// Runs the continuation over the schedule; the observer sees each solution
/// as soon as it converges.
SweepResult solve_geodesic(const EpsProblem& problem, const NewtonConfig& cfg,
                           const EpsObserver& observer = {});

struct GeodesicPath {
  GridSpec grid;
  /// phi_t for every xi node (endpoints are the Dirichlet data)
  std::vector<SliceField> slices;
  /// centered xi-derivative at interior nodes; index k-1 for node k
  std::vector<SliceField> velocity;
  std::vector<double> times;
};

GeodesicPath extract_path(const ScalarField& psi);

/// Discrete sum of phi_dot^2 (1 + Laplacian(phi_t)/4) hx hy, one value per
/// interior t.
std::vector<double> geodesic_speed(const GeodesicPath& path);

/// (max - min) / mean of the speed profile.
double speed_variation(const std::vector<double>& speed);

}  // namespace malab
