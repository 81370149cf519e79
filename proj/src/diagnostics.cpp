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

#include "malab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "malab/eigencalc.hpp"
#include "malab/error.hpp"
#include "malab/geodesic.hpp"
#include "malab/stencil.hpp"

namespace malab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

EigenField hessian_eigen_field(const ScalarField& psi) {
  const GridSpec& g = psi.grid();
  EigenField out{ScalarField(g, kNaN), -std::numeric_limits<double>::infinity(), {}};
  for (int k = 1; k < g.nt - 1; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double l1 = eigen_decompose(real_hessian(psi, {i, j, k})).lambdas[0];
        out.lambda1(i, j, k) = l1;
        if (l1 > out.max) {
          out.max = l1;
          out.argmax = {i, j, k};
        }
      }
  return out;
}

double probe_lambda_max(const ScalarField& psi, const Node& n) {
  const SymMatrix h = real_hessian(psi, n);
  double best = -std::numeric_limits<double>::infinity();
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        Vec4 v{static_cast<double>(dx), static_cast<double>(dy), static_cast<double>(dz), 0.0};
        const double len2 = dot(v, v, 3);
        best = std::max(best, h.bilinear(v, v) / len2);
      }
  return best;
}

void QFieldConfig::validate() const {
  if (!(A > 1.0)) throw Error(ErrorCode::InvalidArgument, "QFieldConfig: A must exceed 1");
}

QFieldResult q_field(const ScalarField& psi, const QFieldConfig& cfg) {
  cfg.validate();
  const GridSpec& g = psi.grid();
  double psi_max = -std::numeric_limits<double>::infinity();
  for (double v : psi.values()) psi_max = std::max(psi_max, v);
  ScalarField s(g);
  double s_max = 0.0;
  for (int k = 0; k < g.nt; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        s(i, j, k) = grad_norm_sq(psi, {i, j, k});
        s_max = std::max(s_max, s(i, j, k));
      }
  QFieldResult out{ScalarField(g, kNaN), -std::numeric_limits<double>::infinity(), {}, 0, 0};
  for (int k = 1; k < g.nt - 1; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double l1 = eigen_decompose(real_hessian(psi, {i, j, k})).lambdas[0];
        if (!(l1 > 0.0)) {
          ++out.excluded;
          continue;
        }
        const HValues hv = h_eval({s(i, j, k), s_max});
        const double q = std::log(l1) + hv.h - cfg.A * (psi(i, j, k) - psi_max);
        out.q(i, j, k) = q;
        ++out.evaluated;
        if (q > out.sup) {
          out.sup = q;
          out.argmax = {i, j, k};
        }
      }
  if (out.evaluated == 0) out.sup = kNaN;
  return out;
}

PlateauVerdict plateau_test(const std::vector<PlateauRow>& rows) {
  if (rows.size() < 3)
    throw Error(ErrorCode::InvalidArgument, "plateau_test: need at least 3 rows");
  const auto tail = std::vector<PlateauRow>(rows.end() - 3, rows.end());
  double mx = 0.0, my = 0.0;
  for (const auto& r : tail) {
    mx += std::log(1.0 / r.eps);
    my += r.value;
  }
  mx /= 3.0;
  my /= 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& r : tail) {
    const double dx = std::log(1.0 / r.eps) - mx;
    sxy += dx * (r.value - my);
    sxx += dx * dx;
  }
  PlateauVerdict v;
  v.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  for (const auto& r : tail) v.scale = std::max(v.scale, std::abs(r.value));
  const double prev = tail[1].value, last = tail[2].value;
  v.last_change = prev != 0.0 ? (last - prev) / std::abs(prev) : (last > 0.0 ? 1.0 : 0.0);
  v.pass = v.slope <= kPlateauSlope * v.scale && v.last_change <= kPlateauChange;
  return v;
}

double holder_seminorm(const ScalarField& psi, double alpha, const HolderOptions& opt) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::InvalidArgument, "holder_seminorm: alpha must lie in (0,1)");
  const GridSpec& g = psi.grid();
  std::vector<Gradient> grad(g.size());
  for (int k = 0; k < g.nt; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) grad[g.index(i, j, k)] = gradient(psi, {i, j, k});

  auto ratio = [&](int i, int j, int k, int di, int dj, int dk) {
    const Gradient& a = grad[g.index(i, j, k)];
    const Gradient& b = grad[g.index(g.wrap_x(i + di), g.wrap_y(j + dj), k + dk)];
    const double dx = di * g.hx, dy = dj * g.hy, dt = dk * g.ht;
    const double dist = std::sqrt(dx * dx + dy * dy + dt * dt);
    const double dg = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                                (a.t - b.t) * (a.t - b.t));
    return dg / std::pow(dist, alpha);
  };

  const int r = opt.near_radius;
  // 4 h with the finest spacing, so the +-r step box covers every such pair
  const double rmax = r * std::min({g.hx, g.hy, g.ht});
  std::vector<std::array<int, 3>> offsets;
  for (int dk = 0; dk <= r; ++dk)
    for (int dj = -r; dj <= r; ++dj)
      for (int di = -r; di <= r; ++di) {
        // half space: skip the mirror image of each offset
        if (dk == 0 && (dj < 0 || (dj == 0 && di <= 0))) continue;
        if (2 * std::abs(di) >= g.nx || 2 * std::abs(dj) >= g.ny) continue;
        const double dx = di * g.hx, dy = dj * g.hy, dt = dk * g.ht;
        if (std::sqrt(dx * dx + dy * dy + dt * dt) <= rmax * (1.0 + 1e-12))
          offsets.push_back({di, dj, dk});
      }

  double best = 0.0;
  for (int k = 0; k < g.nt; ++k)
    for (const auto& o : offsets) {
      if (k + o[2] >= g.nt) continue;
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) best = std::max(best, ratio(i, j, k, o[0], o[1], o[2]));
    }

  std::mt19937_64 rng(opt.seed);
  const std::uint64_t total = g.size();
  for (int p = 0; p < opt.far_pairs; ++p) {
    const std::uint64_t u = rng() % total, v = rng() % total;
    if (u == v) continue;
    const int iu = static_cast<int>(u % g.nx), ju = static_cast<int>((u / g.nx) % g.ny),
              ku = static_cast<int>(u / g.slice_size());
    const int iv = static_cast<int>(v % g.nx), jv = static_cast<int>((v / g.nx) % g.ny),
              kv = static_cast<int>(v / g.slice_size());
    // minimal periodic image
    int di = iv - iu, dj = jv - ju;
    if (2 * di > g.nx) di -= g.nx;
    if (2 * di < -g.nx) di += g.nx;
    if (2 * dj > g.ny) dj -= g.ny;
    if (2 * dj < -g.ny) dj += g.ny;
    best = std::max(best, ratio(iu, ju, ku, di, dj, kv - ku));
  }
  return best;
}

HessianBoundCheck hessian_bound_check(const ScalarField& psi) {
  const GridSpec& g = psi.grid();
  HessianBoundCheck out;
  out.sup_lambda1 = -std::numeric_limits<double>::infinity();
  double max_trace = 0.0;
  for (int k = 1; k < g.nt - 1; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const SymMatrix h = real_hessian(psi, {i, j, k});
        out.max_entry = std::max(out.max_entry, h.max_abs_entry());
        out.sup_lambda1 = std::max(out.sup_lambda1, eigen_decompose(h).lambdas[0]);
        max_trace = std::max(max_trace, complex_hessian(psi, {i, j, k}).trace());
      }
  out.constant = 2.0 * (1.0 + max_trace);
  out.pass = out.max_entry <= out.constant * std::max(out.sup_lambda1, 0.0) + out.constant;
  return out;
}

DiagnosticsRow diagnostics_row(double eps, const ScalarField& psi, const DiagnosticsConfig& cfg) {
  const GridSpec& g = psi.grid();
  DiagnosticsRow row;
  row.eps = eps;
  for (double v : psi.values()) row.sup_psi = std::max(row.sup_psi, std::abs(v));
  row.sup_lap = -std::numeric_limits<double>::infinity();
  row.min_det = std::numeric_limits<double>::infinity();
  for (int k = 0; k < g.nt; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Node n{i, j, k};
        row.sup_grad = std::max(row.sup_grad, std::sqrt(2.0 * grad_norm_sq(psi, n)));
        if (!g.is_interior_t(k)) continue;
        const SymMatrix h = real_hessian(psi, n);
        row.sup_lap = std::max(row.sup_lap, h.trace());
        const double det = complex_hessian(psi, n).det();
        row.min_det = std::min(row.min_det, det);
        row.max_det = std::max(row.max_det, det);
      }
  row.sup_lambda1 = hessian_eigen_field(psi).max;
  const QFieldResult q = q_field(psi, cfg.q);
  row.sup_q = q.sup;
  row.q_argmax = q.argmax;
  row.speed_var = speed_variation(geodesic_speed(extract_path(psi)));
  row.holder = holder_seminorm(psi, cfg.alpha);
  return row;
}

bool DiagnosticsReport::all_pass() const noexcept {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<Verdict> standard_verdicts(const std::vector<DiagnosticsRow>& rows) {
  std::vector<Verdict> out;
  if (rows.size() >= 3) {
    std::vector<PlateauRow> l1, hol;
    for (const auto& r : rows) {
      l1.push_back({r.eps, r.sup_lambda1});
      hol.push_back({r.eps, r.holder});
    }
    for (const auto& [name, series] :
         {std::pair{"plateau_sup_lambda1", l1}, std::pair{"plateau_holder", hol}}) {
      const PlateauVerdict v = plateau_test(series);
      out.push_back({std::string(name) + "_slope", v.slope, kPlateauSlope * v.scale,
                     v.slope <= kPlateauSlope * v.scale});
      out.push_back({std::string(name) + "_last_change", v.last_change, kPlateauChange,
                     v.last_change <= kPlateauChange});
    }
  } else {
    out.push_back({"plateau_rows", static_cast<double>(rows.size()), 3.0, false});
  }
  double worst_lo = std::numeric_limits<double>::infinity(), worst_hi = 0.0;
  for (const auto& r : rows) {
    worst_lo = std::min(worst_lo, r.min_det / r.eps);
    worst_hi = std::max(worst_hi, r.min_det / r.eps);
  }
  out.push_back({"min_det_over_eps_low", worst_lo, 0.5, worst_lo >= 0.5});
  out.push_back({"min_det_over_eps_high", worst_hi, 2.0, worst_hi <= 2.0});
  // upper end of the range eps [1, e^2]
  const double e2 = std::exp(2.0);
  double top_lo = std::numeric_limits<double>::infinity(), top_hi = 0.0;
  for (const auto& r : rows) {
    top_lo = std::min(top_lo, r.max_det / (r.eps * e2));
    top_hi = std::max(top_hi, r.max_det / (r.eps * e2));
  }
  out.push_back({"max_det_over_eps_e2_low", top_lo, 0.5, top_lo >= 0.5});
  out.push_back({"max_det_over_eps_e2_high", top_hi, 2.0, top_hi <= 2.0});
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
  os << "eps,sup_psi,sup_grad,sup_lap,sup_lambda1,min_det,sup_Q,speed_var,holder\n";
  for (const auto& r : rows) {
    os << format_double(r.eps) << ',' << format_double(r.sup_psi) << ','
       << format_double(r.sup_grad) << ',' << format_double(r.sup_lap) << ','
       << format_double(r.sup_lambda1) << ',' << format_double(r.min_det) << ','
       << format_double(r.sup_q) << ',' << format_double(r.speed_var) << ','
       << format_double(r.holder) << '\n';
  }
}

}  // namespace malab
