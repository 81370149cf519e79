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

#include "malab/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "malab/error.hpp"

namespace malab {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += vals[p] * x[cols[p]];
    y[r] = s;
  }
}

double CsrMatrix::diagonal(std::size_t r) const {
  for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
    if (cols[p] == r) return vals[p];
  return 0.0;
}

PreconditionerKind parse_preconditioner(std::string_view name) {
  if (name == "jacobi") return PreconditionerKind::Jacobi;
  if (name == "ilu0") return PreconditionerKind::Ilu0;
  throw Error(ErrorCode::InvalidArgument,
              "unknown preconditioner '" + std::string(name) + "' (jacobi|ilu0)");
}

const char* preconditioner_name(PreconditionerKind k) noexcept {
  return k == PreconditionerKind::Jacobi ? "jacobi" : "ilu0";
}

Preconditioner::Preconditioner(const CsrMatrix& a, PreconditionerKind kind)
    : kind_(kind), a_(&a) {
  const std::size_t n = a.rows;
  if (kind_ == PreconditionerKind::Jacobi) {
    inv_diag_.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      const double d = a.diagonal(r);
      inv_diag_[r] = d != 0.0 ? 1.0 / d : 1.0;
    }
    return;
  }
  lu_ = a.vals;
  diag_pos_.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    auto first = a.cols.begin() + static_cast<std::ptrdiff_t>(a.row_ptr[r]);
    auto last = a.cols.begin() + static_cast<std::ptrdiff_t>(a.row_ptr[r + 1]);
    auto it = std::lower_bound(first, last, r);
    if (it == last || *it != r)
      throw Error(ErrorCode::InvalidArgument, "ilu0: missing diagonal in row " + std::to_string(r));
    diag_pos_[r] = static_cast<std::size_t>(it - a.cols.begin());
  }
  // IKJ variant restricted to the pattern of A.
  std::vector<std::ptrdiff_t> where(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
      where[a.cols[p]] = static_cast<std::ptrdiff_t>(p);
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const std::size_t k = a.cols[p];
      if (k >= i) break;
      const double piv = lu_[diag_pos_[k]];
      lu_[p] /= piv;
      const double lik = lu_[p];
      for (std::size_t q = diag_pos_[k] + 1; q < a.row_ptr[k + 1]; ++q) {
        const std::ptrdiff_t w = where[a.cols[q]];
        if (w >= 0) lu_[static_cast<std::size_t>(w)] -= lik * lu_[q];
      }
    }
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) where[a.cols[p]] = -1;
    if (lu_[diag_pos_[i]] == 0.0) lu_[diag_pos_[i]] = 1e-300;
  }
}

void Preconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const std::size_t n = r.size();
  if (kind_ == PreconditionerKind::Jacobi) {
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag_[i] * r[i];
    return;
  }
  const CsrMatrix& a = *a_;
  for (std::size_t i = 0; i < n; ++i) {
    double s = r[i];
    for (std::size_t p = a.row_ptr[i]; p < diag_pos_[i]; ++p) s -= lu_[p] * z[a.cols[p]];
    z[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = z[i];
    for (std::size_t p = diag_pos_[i] + 1; p < a.row_ptr[i + 1]; ++p) s -= lu_[p] * z[a.cols[p]];
    z[i] = s / lu_[diag_pos_[i]];
  }
}

KrylovResult gmres(const CsrMatrix& a, const Preconditioner& m, std::span<const double> b,
                   std::span<double> x, double rel_tol, int max_iter, int restart) {
  const std::size_t n = b.size();
  KrylovResult res;
  const double bnorm = nrm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  const int mdim = std::max(1, std::min(restart, max_iter));
  std::vector<std::vector<double>> v(static_cast<std::size_t>(mdim) + 1, std::vector<double>(n));
  std::vector<std::vector<double>> z(static_cast<std::size_t>(mdim), std::vector<double>(n));
  std::vector<double> h(static_cast<std::size_t>((mdim + 1) * mdim));
  std::vector<double> cs(mdim), sn(mdim), g(mdim + 1), y(mdim);
  std::vector<double> w(n);
  auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(i * mdim + j)]; };

  while (res.iterations < max_iter) {
    a.multiply(x, w);
    for (std::size_t i = 0; i < n; ++i) v[0][i] = b[i] - w[i];
    double beta = nrm2(v[0]);
    res.relative_residual = beta / bnorm;
    if (res.relative_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) v[0][i] /= beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int j = 0;
    for (; j < mdim && res.iterations < max_iter; ++j) {
      ++res.iterations;
      m.apply(v[j], z[j]);
      a.multiply(z[j], w);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = dot(w, v[i]);
        for (std::size_t k = 0; k < n; ++k) w[k] -= H(i, j) * v[i][k];
      }
      H(j + 1, j) = nrm2(w);
      if (H(j + 1, j) > 0.0)
        for (std::size_t k = 0; k < n; ++k) v[j + 1][k] = w[k] / H(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double den = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = den > 0.0 ? H(j, j) / den : 1.0;
      sn[j] = den > 0.0 ? H(j + 1, j) / den : 0.0;
      H(j, j) = den;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      res.relative_residual = std::abs(g[j + 1]) / bnorm;
      if (res.relative_residual <= rel_tol) {
        ++j;
        break;
      }
    }
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j; ++k) s -= H(i, k) * y[k];
      y[i] = H(i, i) != 0.0 ? s / H(i, i) : 0.0;
    }
    for (int i = 0; i < j; ++i)
      for (std::size_t k = 0; k < n; ++k) x[k] += y[i] * z[i][k];
    if (res.relative_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace malab
