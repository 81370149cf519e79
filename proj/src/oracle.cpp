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

#include "malab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "malab/error.hpp"
#include "malab/stencil.hpp"

namespace malab {

using std::numbers::pi;

ConvexProfile make_profile(double x0, double h, std::vector<double> values, bool strict) {
  if (values.size() < 3 || !(h > 0.0))
    throw Error(ErrorCode::InvalidArgument, "make_profile: need >= 3 samples and h > 0");
  ConvexProfile p{x0, h, std::move(values), std::numeric_limits<double>::infinity()};
  for (std::size_t i = 1; i + 1 < p.values.size(); ++i)
    p.margin = std::min(p.margin, (p.values[i + 1] - 2.0 * p.values[i] + p.values[i - 1]) / (h * h));
  if (strict && !(p.margin > 0.0)) {
    std::ostringstream os;
    os << "make_profile: not strictly convex (min second difference " << p.margin << ")";
    throw Error(ErrorCode::NonConvex, os.str());
  }
  return p;
}

double conjugate_at(const ConvexProfile& prof, double p) {
  const auto& v = prof.values;
  // first index whose right slope exceeds p maximizes p x_i - psi_i
  std::size_t lo = 0, hi = v.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const double slope = (v[mid + 1] - v[mid]) / prof.h;
    if (slope < p)
      lo = mid + 1;
    else
      hi = mid;
  }
  return p * prof.x(lo) - v[lo];
}

ConvexProfile legendre_transform(const ConvexProfile& prof) {
  const auto& v = prof.values;
  const std::size_t n = v.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "legendre_transform: need >= 3 samples");
  double slope_scale = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    slope_scale = std::max(slope_scale, std::abs(v[i + 1] - v[i]) / prof.h);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double jump = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / prof.h;
    if (jump < -1e-12 * slope_scale)
      throw Error(ErrorCode::NonConvex, "legendre_transform: input slopes decrease at sample " +
                                            std::to_string(i));
  }
  const double p0 = prof.first_slope();
  const double p1 = prof.last_slope();
  const double hp = (p1 - p0) / static_cast<double>(n - 1);
  std::vector<double> dual(n);
  std::size_t i = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = p0 + static_cast<double>(j) * hp;
    while (i + 1 < n && (v[i + 1] - v[i]) / prof.h < p) ++i;
    dual[j] = p * prof.x(i) - v[i];
  }
  return make_profile(p0, hp, std::move(dual), false);
}

namespace {

ConvexProfile extended_profile(const Periodic1d& phi, int per_period) {
  // three periods [-1, 2]
  const int n = 3 * per_period + 1;
  const double h = 1.0 / per_period;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + i * h;
    v[static_cast<std::size_t>(i)] = 2.0 * x * x + phi(x - std::floor(x));
  }
  return make_profile(-1.0, h, std::move(v));
}

}  // namespace

std::vector<double> toric_geodesic_oracle(const Periodic1d& phi0, const Periodic1d& phi1, double t,
                                          const std::vector<double>& xs,
                                          const ToricOracleOptions& opt) {
  if (!(t >= 0.0 && t <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "toric_geodesic_oracle: t must lie in [0,1]");
  const ConvexProfile u0 = extended_profile(phi0, opt.samples_per_period);
  const ConvexProfile u1 = extended_profile(phi1, opt.samples_per_period);
  const double p_lo = std::max(u0.first_slope(), u1.first_slope());
  const double p_hi = std::min(u0.last_slope(), u1.last_slope());
  const std::size_t m = u0.values.size() * 4;
  const double hp = (p_hi - p_lo) / static_cast<double>(m - 1);
  std::vector<double> dual(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double p = p_lo + static_cast<double>(j) * hp;
    dual[j] = (1.0 - t) * conjugate_at(u0, p) + t * conjugate_at(u1, p);
  }
  const ConvexProfile ut_dual = make_profile(p_lo, hp, std::move(dual), false);
  std::vector<double> out(xs.size());
  for (std::size_t q = 0; q < xs.size(); ++q) {
    const double x = xs[q] - std::floor(xs[q]);
    out[q] = conjugate_at(ut_dual, x) - 2.0 * x * x;
  }
  return out;
}

ScalarField toric_oracle_field(const Periodic1d& phi0, const Periodic1d& phi1, const GridSpec& grid,
                               const ToricOracleOptions& opt) {
  std::vector<double> xs(static_cast<std::size_t>(grid.nx));
  for (int i = 0; i < grid.nx; ++i) xs[static_cast<std::size_t>(i)] = grid.x(i);
  ScalarField f(grid);
  for (int k = 0; k < grid.nt; ++k) {
    std::vector<double> row;
    if (k == 0)
      for (double x : xs) row.push_back(phi0(x));
    else if (k == grid.nt - 1)
      for (double x : xs) row.push_back(phi1(x));
    else
      row = toric_geodesic_oracle(phi0, phi1, grid.xi(k), xs, opt);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) f(i, j, k) = row[static_cast<std::size_t>(i)];
  }
  return f;
}

double degenerate_residual(const ScalarField& psi) {
  const GridSpec& g = psi.grid();
  double worst = 0.0;
  for (int k = 1; k < g.nt - 1; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        worst = std::max(worst, std::abs(complex_hessian(psi, {i, j, k}).det()));
  return worst;
}

Periodic1d trig_interpolant(std::vector<double> samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2 || n % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "trig_interpolant: need an even sample count");
  // real DFT coefficients
  std::vector<double> ca(static_cast<std::size_t>(n / 2 + 1)), cb(ca.size());
  for (int m = 0; m <= n / 2; ++m) {
    double sa = 0.0, sb = 0.0;
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * pi * m * i / n;
      sa += samples[static_cast<std::size_t>(i)] * std::cos(th);
      sb += samples[static_cast<std::size_t>(i)] * std::sin(th);
    }
    const double w = (m == 0 || m == n / 2) ? 1.0 / n : 2.0 / n;
    ca[static_cast<std::size_t>(m)] = w * sa;
    cb[static_cast<std::size_t>(m)] = (m == n / 2) ? 0.0 : w * sb;
  }
  return [ca = std::move(ca), cb = std::move(cb)](double x) {
    double s = 0.0;
    for (std::size_t m = 0; m < ca.size(); ++m) {
      const double th = 2.0 * pi * static_cast<double>(m) * x;
      s += ca[m] * std::cos(th) + cb[m] * std::sin(th);
    }
    return s;
  };
}

ScalarField trivial_eps_solution(const GridSpec& grid, double eps) {
  const double e2m1 = std::exp(2.0) - 1.0;
  return ScalarField::sample(grid, [&](double, double, double t) {
    return eps * (std::exp(2.0 * t) - 1.0 - e2m1 * t);
  });
}

ManufacturedSolution standard_manufactured(double amp) {
  ManufacturedSolution m;
  m.value = [amp](double x, double, double t) {
    return 2.0 * t * t + amp * std::cos(2 * pi * x) * std::sin(pi * t);
  };
  m.dxx = [amp](double x, double, double t) {
    return -4.0 * pi * pi * amp * std::cos(2 * pi * x) * std::sin(pi * t);
  };
  m.dyy = [](double, double, double) { return 0.0; };
  m.dtt = [amp](double x, double, double t) {
    return 4.0 - pi * pi * amp * std::cos(2 * pi * x) * std::sin(pi * t);
  };
  m.dxt = [amp](double x, double, double t) {
    return -2.0 * pi * pi * amp * std::sin(2 * pi * x) * std::cos(pi * t);
  };
  m.dyt = [](double, double, double) { return 0.0; };
  return m;
}

Density manufactured_rhs(const ManufacturedSolution& m, const GridSpec& grid) {
  Density rhs(grid, 1.0);
  for (int k = 1; k < grid.nt - 1; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i), y = grid.y(j), t = grid.xi(k);
        HermitianSlot s;
        s.a = 1.0 + 0.25 * (m.dxx(x, y, t) + m.dyy(x, y, t));
        s.b = {0.25 * m.dxt(x, y, t), -0.25 * m.dyt(x, y, t)};
        s.c = 0.25 * m.dtt(x, y, t);
        if (!s.admissible()) {
          std::ostringstream os;
          os << "manufactured_rhs: analytic slot inadmissible at node (" << i << "," << j << ","
             << k << "): a=" << s.a << " det=" << s.det();
          throw Error(ErrorCode::Inadmissible, os.str());
        }
        rhs(i, j, k) = s.det();
      }
  return rhs;
}

Density manufactured_rhs(const ScalarField& psi_true) {
  const GridSpec& g = psi_true.grid();
  Density rhs(g, 1.0);
  for (int k = 1; k < g.nt - 1; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const HermitianSlot s = complex_hessian(psi_true, {i, j, k});
        if (!s.admissible()) {
          std::ostringstream os;
          os << "manufactured_rhs: slot inadmissible at node (" << i << "," << j << "," << k
             << "): a=" << s.a << " det=" << s.det();
          throw Error(ErrorCode::Inadmissible, os.str());
        }
        rhs(i, j, k) = s.det();
      }
  return rhs;
}

FieldComparison compare_fields(const ScalarField& f, const ScalarField& g) {
  if (!(f.grid() == g.grid()))
    throw Error(ErrorCode::DimensionMismatch, "compare_fields: grid mismatch");
  const GridSpec& gr = f.grid();
  FieldComparison out;
  double sum = 0.0;
  for (int k = 0; k < gr.nt; ++k) {
    SliceDistance sd{k, 0.0, 0.0};
    double ssum = 0.0;
    for (int j = 0; j < gr.ny; ++j)
      for (int i = 0; i < gr.nx; ++i) {
        const double d = f(i, j, k) - g(i, j, k);
        sd.sup = std::max(sd.sup, std::abs(d));
        ssum += d * d;
        const Gradient a = gradient(f, {i, j, k});
        const Gradient b = gradient(g, {i, j, k});
        const double dg = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                                    (a.t - b.t) * (a.t - b.t));
        out.c1 = std::max(out.c1, dg);
      }
    sd.l2 = std::sqrt(ssum * gr.hx * gr.hy);
    out.sup = std::max(out.sup, sd.sup);
    sum += ssum;
    out.slices.push_back(sd);
  }
  out.l2 = std::sqrt(sum * gr.hx * gr.hy * gr.ht);
  return out;
}

}  // namespace malab
