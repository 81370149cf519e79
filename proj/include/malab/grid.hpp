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

#include <cstddef>
#include <span>
#include <vector>

namespace malab {

/// Discretization of T^2 x [0,1]: periodic in x and y on [0,1)^2, Dirichlet
/// layers at xi-index 0 and nt-1.
struct GridSpec {
  int m = 1;
  int nx = 0;
  int ny = 0;
  int nt = 0;
  double hx = 0.0;
  double hy = 0.0;
  double ht = 0.0;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(nx) * ny * nt;
  }
  std::size_t slice_size() const noexcept {
    return static_cast<std::size_t>(nx) * ny;
  }
  // x fastest, then y, then xi
  std::size_t index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(ny) * k);
  }
  int wrap_x(int i) const noexcept { return ((i % nx) + nx) % nx; }
  int wrap_y(int j) const noexcept { return ((j % ny) + ny) % ny; }

  double x(int i) const noexcept { return i * hx; }
  double y(int j) const noexcept { return j * hy; }
  double xi(int k) const noexcept { return k * ht; }

  bool is_interior_t(int k) const noexcept { return k > 0 && k < nt - 1; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Validates and returns a grid; throws Error(InvalidArgument) naming the
/// offending field.
GridSpec make_grid(int m, int nx, int ny, int nt);

struct Node {
  int i = 0;
  int j = 0;
  int k = 0;
  friend bool operator==(const Node&, const Node&) = default;
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double fill = 0.0)
      : grid_(grid), values_(grid.size(), fill) {}
  ScalarField(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const noexcept { return grid_; }

  double operator()(int i, int j, int k) const noexcept {
    return values_[grid_.index(i, j, k)];
  }
  double& operator()(int i, int j, int k) noexcept {
    return values_[grid_.index(i, j, k)];
  }
  double at(const Node& n) const noexcept { return (*this)(n.i, n.j, n.k); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  template <class F>
  static ScalarField sample(const GridSpec& grid, F&& f) {
    ScalarField out(grid);
    for (int k = 0; k < grid.nt; ++k)
      for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
          out(i, j, k) = f(grid.x(i), grid.y(j), grid.xi(k));
    return out;
  }

  bool all_finite() const noexcept;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Periodic potential on the torus slice (nx*ny values, x fastest).
class SliceField {
 public:
  SliceField() = default;
  SliceField(int nx, int ny, double fill = 0.0)
      : nx_(nx), ny_(ny), values_(static_cast<std::size_t>(nx) * ny, fill) {}

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double operator()(int i, int j) const noexcept {
    return values_[static_cast<std::size_t>(i) + static_cast<std::size_t>(nx_) * j];
  }
  double& operator()(int i, int j) noexcept {
    return values_[static_cast<std::size_t>(i) + static_cast<std::size_t>(nx_) * j];
  }
  std::span<const double> values() const noexcept { return values_; }

  template <class F>
  static SliceField sample(const GridSpec& grid, F&& f) {
    SliceField out(grid.nx, grid.ny);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) out(i, j) = f(grid.x(i), grid.y(j));
    return out;
  }

  friend bool operator==(const SliceField&, const SliceField&) = default;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> values_;
};

SliceField extract_slice(const ScalarField& f, int k);
void assign_slice(ScalarField& f, int k, const SliceField& s);

}  // namespace malab
