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

#include "malab/malab.h"

#include <algorithm>
#include <iostream>
#include <string>

#include <omp.h>

#include "malab/diagnostics.hpp"
#include "malab/eigencalc.hpp"
#include "malab/error.hpp"
#include "malab/field_io.hpp"
#include "malab/oracle.hpp"
#include "malab/run.hpp"

struct malab_field {
  malab::ScalarField field;
};

namespace {

thread_local std::string g_last_error;
const int g_default_threads = omp_get_max_threads();

template <class F>
malab_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return MALAB_OK;
  } catch (const malab::Error& e) {
    g_last_error = e.what();
    return static_cast<malab_status>(static_cast<int>(e.code()));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MALAB_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw malab::Error(malab::ErrorCode::InvalidArgument, what);
}

malab::CommandOptions options(const char* out) {
  malab::CommandOptions o;
  if (out) o.out = out;
  return o;
}

}  // namespace

extern "C" {

const char* malab_version(void) { return malab::kVersion; }

const char* malab_last_error(void) { return g_last_error.c_str(); }

void malab_set_threads(int n) { omp_set_num_threads(n > 0 ? n : g_default_threads); }

malab_status malab_field_create(int nx, int ny, int nt, malab_field** out) {
  return guard([&] {
    require(out != nullptr, "malab_field_create: out is NULL");
    *out = new malab_field{malab::ScalarField(malab::make_grid(1, nx, ny, nt))};
  });
}

malab_status malab_field_read(const char* path, malab_field** out) {
  return guard([&] {
    require(path && out, "malab_field_read: NULL argument");
    *out = new malab_field{malab::read_field(path)};
  });
}

malab_status malab_field_write(const malab_field* f, const char* path) {
  return guard([&] {
    require(f && path, "malab_field_write: NULL argument");
    malab::write_field(f->field, path);
  });
}

malab_status malab_field_dims(const malab_field* f, int* nx, int* ny, int* nt) {
  return guard([&] {
    require(f && nx && ny && nt, "malab_field_dims: NULL argument");
    *nx = f->field.grid().nx;
    *ny = f->field.grid().ny;
    *nt = f->field.grid().nt;
  });
}

double* malab_field_data(malab_field* f) { return f ? f->field.values().data() : nullptr; }

void malab_field_destroy(malab_field* f) { delete f; }

malab_status malab_trivial_solution(int nx, int ny, int nt, double eps, malab_field** out) {
  return guard([&] {
    require(out != nullptr, "malab_trivial_solution: out is NULL");
    require(eps > 0.0, "malab_trivial_solution: eps must be positive");
    *out = new malab_field{malab::trivial_eps_solution(malab::make_grid(1, nx, ny, nt), eps)};
  });
}

malab_status malab_field_max_lambda1(const malab_field* f, double* out) {
  return guard([&] {
    require(f && out, "malab_field_max_lambda1: NULL argument");
    *out = malab::hessian_eigen_field(f->field).max;
  });
}

malab_status malab_eigen_decompose(int n, const double* rows, double* lambdas, double* vectors) {
  return guard([&] {
    require(rows && lambdas && vectors, "malab_eigen_decompose: NULL argument");
    require(n >= 2 && n <= 4, "malab_eigen_decompose: n must be 2, 3 or 4");
    malab::SymMatrix s(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        require(rows[i * n + j] == rows[j * n + i], "malab_eigen_decompose: matrix not symmetric");
        s.set(i, j, rows[i * n + j]);
      }
    const malab::EigenSystem e = malab::eigen_decompose(s);
    const auto dim = static_cast<std::size_t>(n);
    for (std::size_t a = 0; a < dim; ++a) {
      lambdas[a] = e.lambdas[a];
      const malab::Vec4& v = e.vectors[a];
      std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(dim), vectors + a * dim);
    }
  });
}

malab_status malab_h_eval(double s, double s_max, double* h, double* dh, double* d2h) {
  return guard([&] {
    require(h && dh && d2h, "malab_h_eval: NULL argument");
    const malab::HValues v = malab::h_eval({s, s_max});
    *h = v.h;
    *dh = v.dh;
    *d2h = v.d2h;
  });
}

int malab_cmd_geodesic(const char* config, const char* out) {
  if (!config) return malab::kExitConfig;
  return malab::cmd_geodesic(config, options(out));
}

int malab_cmd_oracle_compare(const char* config, const char* out) {
  if (!config) return malab::kExitConfig;
  return malab::cmd_oracle_compare(config, options(out));
}

int malab_cmd_solve_ma(const char* config, const char* out) {
  std::optional<std::filesystem::path> cfg;
  if (config) cfg.emplace(std::string(config));
  return malab::cmd_solve_ma(cfg, options(out));
}

int malab_cmd_selftest(void) { return malab::cmd_selftest(std::cout); }

}  // extern "C"
