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

#include "malab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "malab/error.hpp"
#include "malab/stencil.hpp"

namespace malab {

PotentialPair make_potential_pair(const GridSpec& grid, SliceField phi0, SliceField phi1) {
  for (const SliceField* s : {&phi0, &phi1})
    if (s->nx() != grid.nx || s->ny() != grid.ny)
      throw Error(ErrorCode::DimensionMismatch, "make_potential_pair: slice shape differs from grid");
  PotentialPair p{std::move(phi0), std::move(phi1), 0.0, 0.0};
  p.m0 = min_slice_margin(p.phi0, grid.hx, grid.hy);
  p.m1 = min_slice_margin(p.phi1, grid.hx, grid.hy);
  if (!(p.m0 > 0.0) || !(p.m1 > 0.0)) {
    std::ostringstream os;
    os << "make_potential_pair: not a Kahler potential pair (margins m0=" << p.m0
       << ", m1=" << p.m1 << ")";
    throw Error(ErrorCode::Inadmissible, os.str());
  }
  return p;
}

EpsProblem build_problem(const PotentialPair& pair, const GridSpec& grid,
                         std::vector<double> schedule) {
  validate_schedule(schedule);
  if (!(pair.m0 > 0.0) || !(pair.m1 > 0.0))
    throw Error(ErrorCode::Inadmissible, "build_problem: inadmissible potential pair");
  EpsProblem prob{pair, grid, std::move(schedule), 0.0, 0.0};
  const double eps0 = prob.schedule.front();

  // The guess has c = k/2 and b independent of k, so each node needs
  // k >= (eps0 e^{2xi} + 2|b|^2) / a.
  ScalarField linear(grid);
  for (int k = 0; k < grid.nt; ++k) {
    const double t = grid.xi(k);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        linear(i, j, k) = (1.0 - t) * pair.phi0(i, j) + t * pair.phi1(i, j);
  }
  double k_min = 0.0;
  Node worst;
  for (int k = 1; k < grid.nt - 1; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const HermitianSlot s = complex_hessian(linear, {i, j, k});
        if (!(s.a > 0.0) || !std::isfinite(s.a)) {
          std::ostringstream os;
          os << "build_problem: k search failed, a=" << s.a << " at node (" << i << "," << j
             << "," << k << ")";
          throw Error(ErrorCode::Inadmissible, os.str());
        }
        const double need = (eps0 * std::exp(2.0 * grid.xi(k)) + 2.0 * std::norm(s.b)) / s.a;
        if (need > k_min) {
          k_min = need;
          worst = {i, j, k};
        }
      }
  if (!std::isfinite(k_min)) {
    std::ostringstream os;
    os << "build_problem: k search failed at node (" << worst.i << "," << worst.j << ","
       << worst.k << ")";
    throw Error(ErrorCode::Inadmissible, os.str());
  }
  prob.k_min = k_min;
  prob.k_init = 2.0 * k_min;
  return prob;
}

ScalarField initial_guess(const EpsProblem& p) {
  const GridSpec& g = p.grid;
  ScalarField f(g);
  for (int k = 0; k < g.nt; ++k) {
    const double t = g.xi(k);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (k == 0)
          f(i, j, k) = p.pair.phi0(i, j);
        else if (k == g.nt - 1)
          f(i, j, k) = p.pair.phi1(i, j);
        else
          f(i, j, k) = (1.0 - t) * p.pair.phi0(i, j) + t * p.pair.phi1(i, j) +
                       p.k_init * t * (t - 1.0);
      }
  }
  return f;
}

SweepResult solve_geodesic(const EpsProblem& problem, const NewtonConfig& cfg,
                           const EpsObserver& observer) {
  const ScalarField guess = initial_guess(problem);
  SweepResult out = continuity_sweep(guess, problem.schedule,
                                     [&](double eps) { return problem.rhs(eps); }, cfg);
  const GridSpec& g = problem.grid;
  for (const EpsSolution& s : out.solutions) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (s.psi(i, j, 0) != problem.pair.phi0(i, j) ||
            s.psi(i, j, g.nt - 1) != problem.pair.phi1(i, j))
          throw Error(ErrorCode::InvalidArgument, "solve_geodesic: boundary data not preserved");
    if (observer) observer(s);
  }
  return out;
}

GeodesicPath extract_path(const ScalarField& psi) {
  const GridSpec& g = psi.grid();
  GeodesicPath path;
  path.grid = g;
  for (int k = 0; k < g.nt; ++k) {
    path.slices.push_back(extract_slice(psi, k));
    path.times.push_back(g.xi(k));
  }
  for (int k = 1; k < g.nt - 1; ++k) {
    SliceField v(g.nx, g.ny);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        v(i, j) = (psi(i, j, k + 1) - psi(i, j, k - 1)) / (2.0 * g.ht);
    path.velocity.push_back(std::move(v));
  }
  return path;
}

std::vector<double> geodesic_speed(const GeodesicPath& path) {
  const GridSpec& g = path.grid;
  std::vector<double> speed;
  for (int k = 1; k < g.nt - 1; ++k) {
    const SliceField& phi = path.slices[static_cast<std::size_t>(k)];
    const SliceField& vel = path.velocity[static_cast<std::size_t>(k - 1)];
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        s += vel(i, j) * vel(i, j) * slice_margin(phi, g.hx, g.hy, i, j);
    speed.push_back(s * g.hx * g.hy);
  }
  return speed;
}

double speed_variation(const std::vector<double>& speed) {
  if (speed.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(speed.begin(), speed.end());
  double mean = 0.0;
  for (double s : speed) mean += s;
  mean /= static_cast<double>(speed.size());
  if (!(mean > 0.0)) return 0.0;
  return (*hi - *lo) / mean;
}

}  // namespace malab
