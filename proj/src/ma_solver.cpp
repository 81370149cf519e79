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

#include "malab/ma_solver.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "malab/error.hpp"

namespace malab {
namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

// Slot entries for every interior node, interior order (k starts at 1).
struct SlotArrays {
  std::vector<double> a, br, bi, c;
};

struct Wraps {
  std::vector<int> ip, im, jp, jm;
  explicit Wraps(const GridSpec& g) : ip(g.nx), im(g.nx), jp(g.ny), jm(g.ny) {
    for (int i = 0; i < g.nx; ++i) {
      ip[i] = (i + 1) % g.nx;
      im[i] = (i + g.nx - 1) % g.nx;
    }
    for (int j = 0; j < g.ny; ++j) {
      jp[j] = (j + 1) % g.ny;
      jm[j] = (j + g.ny - 1) % g.ny;
    }
  }
};

std::size_t interior_count(const GridSpec& g) {
  return g.slice_size() * static_cast<std::size_t>(g.nt - 2);
}

SlotArrays compute_slots(const ScalarField& f) {
  const GridSpec& g = f.grid();
  const Wraps w(g);
  const std::size_t n = interior_count(g);
  SlotArrays s{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
               std::vector<double>(n)};
  const auto v = f.values();
  const double ixx = 1.0 / (g.hx * g.hx), iyy = 1.0 / (g.hy * g.hy), itt = 1.0 / (g.ht * g.ht);
  const double ixt = 1.0 / (4.0 * g.hx * g.ht), iyt = 1.0 / (4.0 * g.hy * g.ht);
#pragma omp parallel for schedule(static)
  for (int k = 1; k < g.nt - 1; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const double f0 = v[g.index(i, j, k)];
        const double fxx = (v[g.index(w.ip[i], j, k)] - 2.0 * f0 + v[g.index(w.im[i], j, k)]) * ixx;
        const double fyy = (v[g.index(i, w.jp[j], k)] - 2.0 * f0 + v[g.index(i, w.jm[j], k)]) * iyy;
        const double ftt = (v[g.index(i, j, k + 1)] - 2.0 * f0 + v[g.index(i, j, k - 1)]) * itt;
        const double fxt = (v[g.index(w.ip[i], j, k + 1)] - v[g.index(w.ip[i], j, k - 1)] -
                            v[g.index(w.im[i], j, k + 1)] + v[g.index(w.im[i], j, k - 1)]) *
                           ixt;
        const double fyt = (v[g.index(i, w.jp[j], k + 1)] - v[g.index(i, w.jp[j], k - 1)] -
                            v[g.index(i, w.jm[j], k + 1)] + v[g.index(i, w.jm[j], k - 1)]) *
                           iyt;
        const std::size_t r = g.index(i, j, k - 1);
        s.a[r] = 1.0 + 0.25 * (fxx + fyy);
        s.br[r] = 0.25 * fxt;
        s.bi[r] = -0.25 * fyt;
        s.c[r] = 0.25 * ftt;
      }
    }
  }
  return s;
}

Node node_of(const GridSpec& g, std::size_t r) {
  const std::size_t slice = g.slice_size();
  const int k = static_cast<int>(r / slice) + 1;
  const std::size_t rem = r % slice;
  return {static_cast<int>(rem % g.nx), static_cast<int>(rem / g.nx), k};
}

double slot_det(const SlotArrays& s, std::size_t r) {
  return s.a[r] * s.c[r] - (s.br[r] * s.br[r] + s.bi[r] * s.bi[r]);
}

// Index of the first inadmissible node, or npos.
std::size_t first_inadmissible(const SlotArrays& s) {
  for (std::size_t r = 0; r < s.a.size(); ++r)
    if (!(s.a[r] > 0.0) || !(slot_det(s, r) > 0.0)) return r;
  return static_cast<std::size_t>(-1);
}

[[noreturn]] void throw_inadmissible(const GridSpec& g, const SlotArrays& s, std::size_t r,
                                     const char* who) {
  const Node n = node_of(g, r);
  std::ostringstream os;
  os << who << ": inadmissible slot at node (" << n.i << "," << n.j << "," << n.k
     << "): a=" << s.a[r] << " b=(" << s.br[r] << "," << s.bi[r] << ") c=" << s.c[r]
     << " det=" << slot_det(s, r);
  throw Error(ErrorCode::Inadmissible, os.str());
}

void check_rhs(const GridSpec& g, const Density& rhs) {
  if (!(rhs.grid() == g))
    throw Error(ErrorCode::DimensionMismatch, "density grid differs from field grid");
}

// Residual on interior unknowns; assumes admissibility was checked.
std::vector<double> interior_residual(const GridSpec& g, const SlotArrays& s, const Density& rhs) {
  const std::size_t n = s.a.size();
  std::vector<double> r(n);
  const auto d = rhs.values();
  const std::size_t off = g.slice_size();
  for (std::size_t q = 0; q < n; ++q) r[q] = std::log(slot_det(s, q)) - std::log(d[q + off]);
  return r;
}

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Estimated floating-point noise of the log-det residual: each second
// difference carries roughly 4 u |psi| / h^2 absolute error.
double rounding_floor(const ScalarField& psi, const SlotArrays& s) {
  const GridSpec& g = psi.grid();
  double scale = 0.0;
  for (double v : psi.values()) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1e-300);
  const double ex = 4.0 * kUnitRoundoff * scale;
  const double da = 0.25 * ex * (1.0 / (g.hx * g.hx) + 1.0 / (g.hy * g.hy)) + kUnitRoundoff;
  const double dc = 0.25 * ex / (g.ht * g.ht);
  const double db = 0.25 * ex * (1.0 / (g.hx * g.ht) + 1.0 / (g.hy * g.ht)) * 0.5;
  double worst = 0.0;
  for (std::size_t r = 0; r < s.a.size(); ++r) {
    const double bmod = std::hypot(s.br[r], s.bi[r]);
    const double noise = std::abs(s.c[r]) * da + std::abs(s.a[r]) * dc + 2.0 * bmod * db;
    worst = std::max(worst, noise / slot_det(s, r));
  }
  return worst;
}

}  // namespace

void NewtonConfig::validate() const {
  auto bad = [](const std::string& what) {
    throw Error(ErrorCode::InvalidArgument, "NewtonConfig: " + what);
  };
  if (!(tol_res > 0.0)) bad("tol_res must be positive");
  if (max_outer <= 0) bad("max_outer must be positive");
  if (!(armijo_factor > 0.0 && armijo_factor < 1.0)) bad("armijo factor must be in (0,1)");
  if (!(armijo_slope > 0.0 && armijo_slope < 0.5)) bad("armijo slope must be in (0,1/2)");
  if (!(linear_tol > 0.0 && linear_tol < 1.0)) bad("linear_tol must be in (0,1)");
  if (linear_max <= 0) bad("linear_max must be positive");
  if (gmres_restart <= 0) bad("gmres_restart must be positive");
  if (!(min_step > 0.0)) bad("min_step must be positive");
}

ScalarField residual_log(const ScalarField& psi, const Density& rhs) {
  const GridSpec& g = psi.grid();
  check_rhs(g, rhs);
  const SlotArrays s = compute_slots(psi);
  if (auto r = first_inadmissible(s); r != static_cast<std::size_t>(-1))
    throw_inadmissible(g, s, r, "residual_log");
  const auto res = interior_residual(g, s, rhs);
  ScalarField out(g);
  std::copy(res.begin(), res.end(), out.values().begin() + static_cast<std::ptrdiff_t>(g.slice_size()));
  return out;
}

ScalarField linearize_apply(const ScalarField& psi, const ScalarField& delta) {
  const GridSpec& g = psi.grid();
  if (!(delta.grid() == g))
    throw Error(ErrorCode::DimensionMismatch, "linearize_apply: grid mismatch");
  ScalarField d0 = delta;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      d0(i, j, 0) = 0.0;
      d0(i, j, g.nt - 1) = 0.0;
    }
  ScalarField out(g);
  for (int k = 1; k < g.nt - 1; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Node n{i, j, k};
        const HermitianSlot m = complex_hessian(psi, n);
        if (!m.admissible()) {
          std::ostringstream os;
          os << "linearize_apply: inadmissible slot at node (" << i << "," << j << "," << k
             << ") det=" << m.det();
          throw Error(ErrorCode::Inadmissible, os.str());
        }
        HermitianSlot dm = complex_hessian(d0, n);
        dm.a -= 1.0;
        const double num = m.c * dm.a + m.a * dm.c - 2.0 * std::real(std::conj(m.b) * dm.b);
        out(i, j, k) = num / m.det();
      }
  return out;
}

CsrMatrix assemble_jacobian(const ScalarField& psi) {
  const GridSpec& g = psi.grid();
  const SlotArrays s = compute_slots(psi);
  if (auto r = first_inadmissible(s); r != static_cast<std::size_t>(-1))
    throw_inadmissible(g, s, r, "assemble_jacobian");
  const Wraps w(g);
  const std::size_t n = s.a.size();
  constexpr int kStencil = 15;
  CsrMatrix m;
  m.rows = n;
  m.row_ptr.resize(n + 1);
  m.cols.resize(n * kStencil);
  m.vals.resize(n * kStencil);
  const double ixx = 1.0 / (g.hx * g.hx), iyy = 1.0 / (g.hy * g.hy), itt = 1.0 / (g.ht * g.ht);
  const double ixt = 1.0 / (4.0 * g.hx * g.ht), iyt = 1.0 / (4.0 * g.hy * g.ht);
  const int nt_int = g.nt - 2;

#pragma omp parallel for schedule(static)
  for (int kk = 0; kk < nt_int; ++kk) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t r = g.index(i, j, kk);
        const double det = slot_det(s, r);
        // d det = c/4 (Dxx + Dyy) + a/4 Dtt - 2 br/4 Dxt + 2 bi/4 Dyt  (bi = -f_yt/4)
        const double cxx = 0.25 * s.c[r] * ixx / det;
        const double cyy = 0.25 * s.c[r] * iyy / det;
        const double ctt = 0.25 * s.a[r] * itt / det;
        const double cxt = -0.5 * s.br[r] * ixt / det;
        const double cyt = 0.5 * s.bi[r] * iyt / det;
        std::array<std::pair<std::ptrdiff_t, double>, kStencil> e{};
        int cnt = 0;
        auto add = [&](int ii, int jj, int kint, double v) {
          if (kint < 0 || kint >= nt_int) return;  // Dirichlet layer
          e[cnt++] = {static_cast<std::ptrdiff_t>(g.index(ii, jj, kint)), v};
        };
        add(i, j, kk, -2.0 * (cxx + cyy + ctt));
        add(w.ip[i], j, kk, cxx);
        add(w.im[i], j, kk, cxx);
        add(i, w.jp[j], kk, cyy);
        add(i, w.jm[j], kk, cyy);
        add(i, j, kk + 1, ctt);
        add(i, j, kk - 1, ctt);
        add(w.ip[i], j, kk + 1, cxt);
        add(w.ip[i], j, kk - 1, -cxt);
        add(w.im[i], j, kk + 1, -cxt);
        add(w.im[i], j, kk - 1, cxt);
        add(i, w.jp[j], kk + 1, cyt);
        add(i, w.jp[j], kk - 1, -cyt);
        add(i, w.jm[j], kk + 1, -cyt);
        add(i, w.jm[j], kk - 1, cyt);
        std::sort(e.begin(), e.begin() + cnt,
                  [](const auto& p, const auto& q) { return p.first < q.first; });
        const std::size_t base = r * kStencil;
        int out = 0;
        for (int p = 0; p < cnt; ++p) {
          if (out > 0 && static_cast<std::ptrdiff_t>(m.cols[base + out - 1]) == e[p].first) {
            m.vals[base + out - 1] += e[p].second;
            continue;
          }
          m.cols[base + out] = static_cast<std::size_t>(e[p].first);
          m.vals[base + out] = e[p].second;
          ++out;
        }
        m.row_ptr[r + 1] = static_cast<std::size_t>(out);
      }
    }
  }
  // compact the fixed-width rows
  std::size_t pos = 0;
  m.row_ptr[0] = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t len = m.row_ptr[r + 1];
    const std::size_t base = r * kStencil;
    for (std::size_t p = 0; p < len; ++p) {
      m.cols[pos + p] = m.cols[base + p];
      m.vals[pos + p] = m.vals[base + p];
    }
    pos += len;
    m.row_ptr[r + 1] = pos;
  }
  m.cols.resize(pos);
  m.vals.resize(pos);
  return m;
}

AdmissibilityResult admissibility_check(const ScalarField& psi) {
  const GridSpec& g = psi.grid();
  const SlotArrays s = compute_slots(psi);
  AdmissibilityResult out;
  out.admissible = true;
  out.min_det = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < s.a.size(); ++r) {
    const double d = slot_det(s, r);
    if (!(s.a[r] > 0.0) || !(d > 0.0)) out.admissible = false;
    if (d < out.min_det) {
      out.min_det = d;
      out.worst_node = node_of(g, r);
    }
  }
  return out;
}

Density geodesic_density(const GridSpec& grid, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "geodesic_density: eps must be > 0");
  return ScalarField::sample(grid, [eps](double, double, double t) { return eps * std::exp(2.0 * t); });
}

void validate_schedule(const std::vector<double>& schedule) {
  if (schedule.empty()) throw Error(ErrorCode::InvalidArgument, "eps schedule is empty");
  for (std::size_t q = 0; q < schedule.size(); ++q) {
    const double e = schedule[q];
    if (!(e > 0.0 && e <= 1.0))
      throw Error(ErrorCode::InvalidArgument,
                  "eps schedule entry " + std::to_string(e) + " not in (0,1]");
    if (q > 0 && !(e < schedule[q - 1]))
      throw Error(ErrorCode::InvalidArgument, "eps schedule must be strictly decreasing");
  }
}

SolveResult newton_solve(const ScalarField& psi0, const Density& rhs, const NewtonConfig& cfg) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  const GridSpec& g = psi0.grid();
  check_rhs(g, rhs);
  for (std::size_t q = g.slice_size(); q < g.size() - g.slice_size(); ++q)
    if (!(rhs.values()[q] > 0.0) || !std::isfinite(rhs.values()[q]))
      throw Error(ErrorCode::InvalidArgument, "newton_solve: density must be positive and finite");

  SolveResult out{psi0, {}};
  SolveReport& rep = out.report;
  ScalarField& psi = out.psi;
  const std::size_t off = g.slice_size();

  SlotArrays slots = compute_slots(psi);
  if (auto r = first_inadmissible(slots); r != static_cast<std::size_t>(-1))
    throw_inadmissible(g, slots, r, "newton_solve (initial guess)");
  std::vector<double> res = interior_residual(g, slots, rhs);
  double rn = sup_norm(res);
  rep.residual_history.push_back(rn);

  auto finish = [&]() {
    rep.min_admissibility = admissibility_check(psi).min_det;
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };
  auto describe = [&]() {
    std::ostringstream os;
    os << " after " << rep.outer_iters << " steps, residual history:";
    for (double h : rep.residual_history) os << ' ' << h;
    return os.str();
  };

  std::vector<double> rhs_lin(res.size()), dx(res.size());
  ScalarField trial(g);
  for (;;) {
    rep.residual_floor = cfg.accept_rounding_floor ? rounding_floor(psi, slots) : 0.0;
    if (rn <= std::max(cfg.tol_res, rep.residual_floor)) break;
    if (rep.outer_iters >= cfg.max_outer) {
      finish();
      throw Error(ErrorCode::MaxIterations, "newton_solve: max_outer exceeded" + describe());
    }

    const CsrMatrix jac = assemble_jacobian(psi);
    const Preconditioner pre(jac, cfg.preconditioner);
    for (std::size_t q = 0; q < res.size(); ++q) rhs_lin[q] = -res[q];
    std::fill(dx.begin(), dx.end(), 0.0);
    const double eta = std::max(cfg.linear_tol, std::min(0.5, 0.1 * rn));
    const KrylovResult kr = gmres(jac, pre, rhs_lin, dx, eta, cfg.linear_max, cfg.gmres_restart);
    rep.linear_iter_counts.push_back(kr.iterations);

    double alpha = 1.0;
    bool accepted = false;
    SlotArrays trial_slots;
    std::vector<double> trial_res;
    double trial_rn = 0.0;
    while (alpha >= cfg.min_step) {
      trial = psi;
      auto tv = trial.values();
      for (std::size_t q = 0; q < dx.size(); ++q) tv[q + off] += alpha * dx[q];
      trial_slots = compute_slots(trial);
      if (first_inadmissible(trial_slots) != static_cast<std::size_t>(-1)) {
        alpha *= 0.5;  // admissibility gate
        continue;
      }
      trial_res = interior_residual(g, trial_slots, rhs);
      trial_rn = sup_norm(trial_res);
      if (trial_rn <= (1.0 - cfg.armijo_slope * alpha) * rn) {
        accepted = true;
        break;
      }
      alpha *= cfg.armijo_factor;
    }
    if (!accepted) {
      finish();
      throw Error(ErrorCode::LineSearch,
                  "newton_solve: line search failed (step below " + std::to_string(cfg.min_step) +
                      ")" + describe());
    }
    psi = std::move(trial);
    trial = ScalarField(g);
    slots = std::move(trial_slots);
    res = std::move(trial_res);
    rn = trial_rn;
    ++rep.outer_iters;
    rep.step_lengths.push_back(alpha);
    rep.residual_history.push_back(rn);
  }
  finish();
  return out;
}

}  // namespace malab
