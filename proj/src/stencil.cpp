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

#include "malab/stencil.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "malab/error.hpp"

namespace malab {
namespace {

struct Offset {
  int di = 0, dj = 0, dk = 0;
};

Offset unit(Axis a) {
  switch (a) {
    case Axis::X: return {1, 0, 0};
    case Axis::Y: return {0, 1, 0};
    case Axis::T: return {0, 0, 1};
  }
  return {};
}

double spacing(const GridSpec& g, Axis a) {
  switch (a) {
    case Axis::X: return g.hx;
    case Axis::Y: return g.hy;
    case Axis::T: return g.ht;
  }
  return 0.0;
}

double value(const ScalarField& f, const Node& n, Offset o1, int s1, Offset o2, int s2) {
  const auto& g = f.grid();
  int i = g.wrap_x(n.i + s1 * o1.di + s2 * o2.di);
  int j = g.wrap_y(n.j + s1 * o1.dj + s2 * o2.dj);
  int k = n.k + s1 * o1.dk + s2 * o2.dk;
  return f(i, j, k);
}

void check_node(const GridSpec& g, const Node& n, bool needs_t_interior) {
  if (n.i < 0 || n.i >= g.nx || n.j < 0 || n.j >= g.ny || n.k < 0 || n.k >= g.nt)
    throw Error(ErrorCode::Stencil, "stencil: node (" + std::to_string(n.i) + "," +
                                        std::to_string(n.j) + "," + std::to_string(n.k) +
                                        ") outside grid");
  if (needs_t_interior && !g.is_interior_t(n.k))
    throw Error(ErrorCode::Stencil, "stencil: xi-stencil at Dirichlet layer k=" +
                                        std::to_string(n.k));
}

}  // namespace

double second_diff(const ScalarField& f, const Node& n, Axis a, Axis b) {
  const auto& g = f.grid();
  check_node(g, n, a == Axis::T || b == Axis::T);
  const Offset oa = unit(a);
  const Offset ob = unit(b);
  const double ha = spacing(g, a);
  const double hb = spacing(g, b);
  if (a == b) {
    return (value(f, n, oa, 1, oa, 0) - 2.0 * f.at(n) + value(f, n, oa, -1, oa, 0)) / (ha * ha);
  }
  return (value(f, n, oa, 1, ob, 1) - value(f, n, oa, 1, ob, -1) -
          value(f, n, oa, -1, ob, 1) + value(f, n, oa, -1, ob, -1)) /
         (4.0 * ha * hb);
}

double first_diff(const ScalarField& f, const Node& n, Axis a) {
  const auto& g = f.grid();
  check_node(g, n, false);
  const Offset o = unit(a);
  const double h = spacing(g, a);
  if (a == Axis::T && n.k == 0)
    return (-3.0 * f(n.i, n.j, 0) + 4.0 * f(n.i, n.j, 1) - f(n.i, n.j, 2)) / (2.0 * h);
  if (a == Axis::T && n.k == g.nt - 1) {
    const int k = n.k;
    return (3.0 * f(n.i, n.j, k) - 4.0 * f(n.i, n.j, k - 1) + f(n.i, n.j, k - 2)) / (2.0 * h);
  }
  return (value(f, n, o, 1, o, 0) - value(f, n, o, -1, o, 0)) / (2.0 * h);
}

HermitianSlot complex_hessian(const ScalarField& f, const Node& n) {
  const double fxx = second_diff(f, n, Axis::X, Axis::X);
  const double fyy = second_diff(f, n, Axis::Y, Axis::Y);
  const double ftt = second_diff(f, n, Axis::T, Axis::T);
  const double fxt = second_diff(f, n, Axis::X, Axis::T);
  const double fyt = second_diff(f, n, Axis::Y, Axis::T);
  HermitianSlot s;
  s.a = 1.0 + 0.25 * (fxx + fyy);
  s.b = {0.25 * fxt, -0.25 * fyt};
  s.c = 0.25 * ftt;
  return s;
}

SymMatrix real_hessian(const ScalarField& f, const Node& n) {
  SymMatrix h(3);
  constexpr Axis axes[3] = {Axis::X, Axis::Y, Axis::T};
  for (int p = 0; p < 3; ++p)
    for (int q = p; q < 3; ++q) h.set(p, q, second_diff(f, n, axes[p], axes[q]));
  return h;
}

Gradient gradient(const ScalarField& f, const Node& n) {
  return {first_diff(f, n, Axis::X), first_diff(f, n, Axis::Y), first_diff(f, n, Axis::T)};
}

double grad_norm_sq(const ScalarField& f, const Node& n) {
  const Gradient d = gradient(f, n);
  return 0.5 * (d.x * d.x + d.y * d.y + d.t * d.t);
}

double slice_margin(const SliceField& s, double hx, double hy, int i, int j) {
  const int nx = s.nx(), ny = s.ny();
  const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
  const int jp = (j + 1) % ny, jm = (j + ny - 1) % ny;
  const double sxx = (s(ip, j) - 2.0 * s(i, j) + s(im, j)) / (hx * hx);
  const double syy = (s(i, jp) - 2.0 * s(i, j) + s(i, jm)) / (hy * hy);
  return 1.0 + 0.25 * (sxx + syy);
}

double min_slice_margin(const SliceField& s, double hx, double hy) {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < s.ny(); ++j)
    for (int i = 0; i < s.nx(); ++i) m = std::min(m, slice_margin(s, hx, hy, i, j));
  return m;
}

}  // namespace malab
