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

#include "malab/grid.hpp"

#include <cmath>
#include <string>

#include "malab/error.hpp"

namespace malab {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Stencil: return "stencil";
    case ErrorCode::MalformedHeader: return "malformed-header";
    case ErrorCode::UnsupportedVersion: return "unsupported-version";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::TruncatedPayload: return "truncated-payload";
    case ErrorCode::Io: return "io";
    case ErrorCode::Inadmissible: return "inadmissible";
    case ErrorCode::DegenerateEigenvalue: return "degenerate-eigenvalue";
    case ErrorCode::NonConvex: return "non-convex";
    case ErrorCode::MaxIterations: return "max-iterations";
    case ErrorCode::LineSearch: return "line-search";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

GridSpec make_grid(int m, int nx, int ny, int nt) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::InvalidArgument, "make_grid: " + msg);
  };
  if (m != 1) fail("unsupported m=" + std::to_string(m) + " (only m=1)");
  if (nx < 8) fail("nx=" + std::to_string(nx) + " must be >= 8");
  if (nx % 2 != 0) fail("nx=" + std::to_string(nx) + " is odd");
  if (ny < 8) fail("ny=" + std::to_string(ny) + " must be >= 8");
  if (ny % 2 != 0) fail("ny=" + std::to_string(ny) + " is odd");
  if (nt < 9) fail("nt=" + std::to_string(nt) + " must be >= 9");
  GridSpec g;
  g.m = m;
  g.nx = nx;
  g.ny = ny;
  g.nt = nt;
  g.hx = 1.0 / nx;
  g.hy = 1.0 / ny;
  g.ht = 1.0 / (nt - 1);
  return g;
}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(ErrorCode::DimensionMismatch,
                "ScalarField: " + std::to_string(values_.size()) +
                    " values for grid of " + std::to_string(grid_.size()));
}

bool ScalarField::all_finite() const noexcept {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

SliceField extract_slice(const ScalarField& f, int k) {
  const auto& g = f.grid();
  SliceField s(g.nx, g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s(i, j) = f(i, j, k);
  return s;
}

void assign_slice(ScalarField& f, int k, const SliceField& s) {
  const auto& g = f.grid();
  if (s.nx() != g.nx || s.ny() != g.ny)
    throw Error(ErrorCode::DimensionMismatch, "assign_slice: slice shape mismatch");
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f(i, j, k) = s(i, j);
}

}  // namespace malab
