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

#include "malab/eigencalc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "malab/error.hpp"

namespace malab {
namespace {

struct Dense {
  int n;
  double a[4][4];
};

Dense to_dense(const SymMatrix& s) {
  Dense d{s.n(), {}};
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) d.a[i][j] = s(i, j);
  return d;
}

// Cyclic Jacobi; v holds eigenvectors as columns.
void jacobi(Dense& d, double v[4][4]) {
  const int n = d.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v[i][j] = (i == j) ? 1.0 : 0.0;
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(d.a[i][j]));
  if (scale == 0.0) return;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(d.a[p][q]));
    if (off <= 1e-15 * scale) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = d.a[p][q];
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (d.a[q][q] - d.a[p][p]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = d.a[k][p], akq = d.a[k][q];
          d.a[k][p] = c * akp - s * akq;
          d.a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = d.a[p][k], aqk = d.a[q][k];
          d.a[p][k] = c * apk - s * aqk;
          d.a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

void fix_sign(Vec4& v, int n) {
  for (int i = 0; i < n; ++i) {
    if (std::abs(v[i]) > 1e-14) {
      if (v[i] < 0.0)
        for (int k = 0; k < n; ++k) v[k] = -v[k];
      return;
    }
  }
}

bool abs_lex_greater(const Vec4& a, const Vec4& b, int n) {
  for (int i = 0; i < n; ++i) {
    const double x = std::abs(a[i]), y = std::abs(b[i]);
    if (std::abs(x - y) > 1e-14) return x > y;
  }
  return false;
}

void check_simple(const EigenSystem& e, const char* who) {
  if (!(e.gap() > kSimpleGap))
    throw Error(ErrorCode::DegenerateEigenvalue,
                std::string(who) + ": lambda1 not simple (gap " + std::to_string(e.gap()) + ")");
}

}  // namespace

EigenSystem eigen_decompose(const SymMatrix& s) {
  if (!s.all_finite())
    throw Error(ErrorCode::InvalidArgument, "eigen_decompose: non-finite entry");
  const int n = s.n();
  EigenSystem e;
  e.n = n;
  std::array<double, 4> lam{};
  std::array<Vec4, 4> vec{};

  if (n == 2) {
    const double a = s(0, 0), b = s(0, 1), d = s(1, 1);
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), b);
    lam[0] = mean + rad;
    lam[1] = mean - rad;
    if (b == 0.0) {
      vec[0] = a >= d ? Vec4{1, 0, 0, 0} : Vec4{0, 1, 0, 0};
    } else {
      Vec4 u{b, lam[0] - a, 0, 0};
      Vec4 w{lam[0] - d, b, 0, 0};
      Vec4 best = norm(u, 2) >= norm(w, 2) ? u : w;
      const double nb = norm(best, 2);
      vec[0] = {best[0] / nb, best[1] / nb, 0, 0};
    }
    vec[1] = {-vec[0][1], vec[0][0], 0, 0};
  } else {
    Dense d = to_dense(s);
    double v[4][4];
    jacobi(d, v);
    for (int a = 0; a < n; ++a) {
      lam[a] = d.a[a][a];
      for (int k = 0; k < n; ++k) vec[a][k] = v[k][a];
    }
  }

  std::array<int, 4> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  std::sort(order.begin(), order.begin() + n, [&](int p, int q) {
    if (std::abs(lam[p] - lam[q]) <= kTieTolerance) return abs_lex_greater(vec[p], vec[q], n);
    return lam[p] > lam[q];
  });
  for (int a = 0; a < n; ++a) {
    e.lambdas[a] = lam[order[a]];
    e.vectors[a] = vec[order[a]];
    fix_sign(e.vectors[a], n);
  }
  return e;
}

SymMatrix perturbation_B(const Vec4& v1, int n) {
  const double len = norm(v1, n);
  if (!(std::abs(len - 1.0) <= 1e-12))
    throw Error(ErrorCode::InvalidArgument,
                "perturbation_B: |V1| = " + std::to_string(len) + " is not 1");
  return SymMatrix::identity(n) - SymMatrix::outer(v1, n);
}

SymMatrix phi_endomorphism(const SymMatrix& h, const SymMatrix& b) {
  if (h.n() != b.n())
    throw Error(ErrorCode::DimensionMismatch, "phi_endomorphism: dimension mismatch");
  return h - b;
}

SymMatrix d_lambda1(const EigenSystem& e) {
  check_simple(e, "d_lambda1");
  return SymMatrix::outer(e.vectors[0], e.n);
}

double d2_lambda1(const EigenSystem& e, const SymMatrix& p, const SymMatrix& q) {
  check_simple(e, "d2_lambda1");
  if (p.n() != e.n || q.n() != e.n)
    throw Error(ErrorCode::DimensionMismatch, "d2_lambda1: dimension mismatch");
  const Vec4& v1 = e.vectors[0];
  double sum = 0.0;
  for (int mu = 1; mu < e.n; ++mu) {
    const Vec4& vm = e.vectors[mu];
    const double num = p.bilinear(v1, vm) * q.bilinear(vm, v1) +
                       p.bilinear(vm, v1) * q.bilinear(v1, vm);
    sum += num / (e.lambdas[0] - e.lambdas[mu]);
  }
#ifdef MALAB_FAULT_INJECT_D2_SIGN
  sum = -sum;
#endif
  return sum;
}

HValues h_eval(const HFunState& st) {
  if (!(st.s >= 0.0) || !(st.s <= st.s_max))
    throw Error(ErrorCode::InvalidArgument, "h_eval: need 0 <= s <= s_max, got s=" +
                                                std::to_string(st.s) +
                                                " s_max=" + std::to_string(st.s_max));
  const double arg = 1.0 + st.s_max - st.s;
  HValues v;
  v.h = -0.5 * std::log(arg);
  v.dh = 1.0 / (2.0 * arg);
  v.d2h = 2.0 * v.dh * v.dh;
  return v;
}

LemmaVectors lemma_vectors(const EigenSystem& e) {
  if (e.n != 2 && e.n != 4)
    throw Error(ErrorCode::InvalidArgument, "lemma_vectors: needs even real dimension 2 or 4");
  const Vec4& v1 = e.vectors[0];
  LemmaVectors out;
  for (int q = 0; 2 * q < e.n; ++q) {
    out.jv1[2 * q] = -v1[2 * q + 1];
    out.jv1[2 * q + 1] = v1[2 * q];
    out.nu[q] = {v1[2 * q], v1[2 * q + 1]};
  }
  double rayleigh_j = 0.0;
  for (int a = 1; a < e.n; ++a) {
    out.mu[a] = dot(out.jv1, e.vectors[a], e.n);
    rayleigh_j += e.lambdas[a] * out.mu[a] * out.mu[a];
  }
  out.w1_norm = 1.0 + 0.5 * (e.lambdas[0] + rayleigh_j);
  return out;
}

}  // namespace malab
