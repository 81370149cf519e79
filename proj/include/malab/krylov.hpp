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
#include <string_view>
#include <vector>

namespace malab {

/// Compressed sparse row matrix with sorted column indices per row.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> cols;
  std::vector<double> vals;

  void multiply(std::span<const double> x, std::span<double> y) const;
  double diagonal(std::size_t r) const;
};

enum class PreconditionerKind { Jacobi, Ilu0 };

PreconditionerKind parse_preconditioner(std::string_view name);
const char* preconditioner_name(PreconditionerKind k) noexcept;

class Preconditioner {
 public:
  Preconditioner(const CsrMatrix& a, PreconditionerKind kind);
  /// z = M^{-1} r
  void apply(std::span<const double> r, std::span<double> z) const;

 private:
  PreconditionerKind kind_;
  const CsrMatrix* a_;
  std::vector<double> inv_diag_;
  // ILU(0) factors share the sparsity of A: unit-lower L and U in one array.
  std::vector<double> lu_;
  std::vector<std::size_t> diag_pos_;
};

struct KrylovResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Restarted right-preconditioned GMRES for the nonsymmetric Newton
/// Jacobian. x holds the initial guess on entry.
KrylovResult gmres(const CsrMatrix& a, const Preconditioner& m, std::span<const double> b,
                   std::span<double> x, double rel_tol, int max_iter, int restart = 60);

}  // namespace malab
