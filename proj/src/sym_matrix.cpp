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

#include "malab/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "malab/error.hpp"

namespace malab {

SymMatrix::SymMatrix(int n) : n_(n) {
  if (n < 2 || n > 4)
    throw Error(ErrorCode::InvalidArgument,
                "SymMatrix: dimension " + std::to_string(n) + " not in {2,3,4}");
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix s(n);
  for (int i = 0; i < n; ++i) s.set(i, i, 1.0);
  return s;
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> d) {
  SymMatrix s(static_cast<int>(d.size()));
  int i = 0;
  for (double v : d) {
    s.set(i, i, v);
    ++i;
  }
  return s;
}

SymMatrix SymMatrix::from_rows(int n, std::initializer_list<double> rows) {
  if (rows.size() != static_cast<std::size_t>(n * n))
    throw Error(ErrorCode::DimensionMismatch, "SymMatrix::from_rows: wrong entry count");
  SymMatrix s(n);
  const double* r = rows.begin();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s.set(i, j, 0.5 * (r[i * n + j] + r[j * n + i]));
  return s;
}

SymMatrix SymMatrix::outer(const Vec4& v, int n) {
  SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s.set(i, j, v[i] * v[j]);
  return s;
}

Vec4 SymMatrix::apply(const Vec4& v) const noexcept {
  Vec4 out{};
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

double SymMatrix::bilinear(const Vec4& v, const Vec4& w) const noexcept {
  return dot(v, apply(w), n_);
}

double SymMatrix::frobenius() const noexcept {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
  return std::sqrt(s);
}

double SymMatrix::max_abs_entry() const noexcept {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j)));
  return m;
}

double SymMatrix::trace() const noexcept {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

bool SymMatrix::all_finite() const noexcept {
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      if (!std::isfinite((*this)(i, j))) return false;
  return true;
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  if (o.n_ != n_) throw Error(ErrorCode::DimensionMismatch, "SymMatrix: dimension mismatch");
  SymMatrix s(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) s.set(i, j, (*this)(i, j) + o(i, j));
  return s;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const { return *this + o * -1.0; }

SymMatrix SymMatrix::operator*(double f) const {
  SymMatrix s(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) s.set(i, j, (*this)(i, j) * f);
  return s;
}

double dot(const Vec4& a, const Vec4& b, int n) noexcept {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec4& a, int n) noexcept { return std::sqrt(dot(a, a, n)); }

}  // namespace malab
