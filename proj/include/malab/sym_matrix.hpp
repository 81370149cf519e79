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

#include <array>
#include <cstddef>

namespace malab {

using Vec4 = std::array<double, 4>;

/// Real symmetric n x n matrix, n in {2,3,4}. Only the upper triangle is
/// stored, so symmetry holds by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n);

  static SymMatrix identity(int n);
  static SymMatrix diagonal(std::initializer_list<double> d);
  /// Symmetric part of a full row-major n x n array.
  static SymMatrix from_rows(int n, std::initializer_list<double> rows);
  static SymMatrix outer(const Vec4& v, int n);

  int n() const noexcept { return n_; }

  double operator()(int i, int j) const noexcept { return data_[slot(i, j)]; }
  void set(int i, int j, double v) noexcept { data_[slot(i, j)] = v; }

  Vec4 apply(const Vec4& v) const noexcept;
  /// v^T S w
  double bilinear(const Vec4& v, const Vec4& w) const noexcept;
  double frobenius() const noexcept;
  double max_abs_entry() const noexcept;
  double trace() const noexcept;
  bool all_finite() const noexcept;

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

 private:
  static std::size_t slot(int i, int j) noexcept {
    if (i > j) std::swap(i, j);
    // packed upper triangle of a 4x4 layout
    constexpr std::array<int, 4> row_start{0, 4, 7, 9};
    return static_cast<std::size_t>(row_start[i] + (j - i));
  }

  int n_ = 0;
  std::array<double, 10> data_{};
};

double dot(const Vec4& a, const Vec4& b, int n) noexcept;
double norm(const Vec4& a, int n) noexcept;

}  // namespace malab
