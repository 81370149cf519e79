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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "malab/eigencalc.hpp"
#include "malab/error.hpp"
#include "malab/field_io.hpp"
#include "malab/run.hpp"
#include "malab/stencil.hpp"

namespace malab {
namespace {

struct Check {
  std::string name;
  int cases = 0;
  double worst = 0.0;
  double tol = 0.0;
  bool pass() const { return worst <= tol; }
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // 53-bit uniform in [lo, hi), independent of the library's distributions
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  SymMatrix sym(int n) {
    SymMatrix s(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) s.set(i, j, uniform(-1.0, 1.0));
    return s;
  }

 private:
  std::mt19937_64 gen_;
};

double lambda1(const SymMatrix& s) { return eigen_decompose(s).lambdas[0]; }

double frob_pair(const SymMatrix& a, const SymMatrix& b) {
  double s = 0.0;
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) s += a(i, j) * b(i, j);
  return s;
}

SymMatrix unit_direction(Rng& rng, int n) {
  SymMatrix p = rng.sym(n);
  return p * (1.0 / p.frobenius());
}

SymMatrix gapped(Rng& rng, int n) {
  for (;;) {
    SymMatrix s = rng.sym(n);
    if (eigen_decompose(s).gap() >= 0.1) return s;
  }
}

void eigen_checks(std::vector<Check>& out, Rng& rng) {
  Check rec{"eigen_reconstruction", 0, 0.0, 1e-12};
  Check orth{"eigen_orthonormality", 0, 0.0, 1e-12};
  Check order{"eigen_ordering", 0, 0.0, 0.0};
  for (int c = 0; c < 200; ++c) {
    const int n = 3 + c % 2;
    const SymMatrix s = rng.sym(n);
    const EigenSystem e = eigen_decompose(s);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double r = 0.0, o = 0.0;
        for (int a = 0; a < n; ++a) {
          r += e.lambdas[a] * e.vectors[a][i] * e.vectors[a][j];
          o += e.vectors[i][a] * e.vectors[j][a];
        }
        rec.worst = std::max(rec.worst, std::abs(r - s(i, j)));
        orth.worst = std::max(orth.worst, std::abs(o - (i == j ? 1.0 : 0.0)));
      }
    for (int a = 0; a + 1 < n; ++a)
      if (e.lambdas[a] < e.lambdas[a + 1]) order.worst += 1.0;
    ++rec.cases;
    ++orth.cases;
    ++order.cases;
  }
  out.insert(out.end(), {rec, orth, order});
}

void derivative_checks(std::vector<Check>& out, Rng& rng) {
  Check d1{"d_lambda1_fd", 0, 0.0, 1e-6};
  Check d2{"d2_lambda1_fd", 0, 0.0, 1e-5};
  for (int c = 0; c < 200; ++c) {
    const int n = 3 + c % 2;
    const SymMatrix s = gapped(rng, n);
    const SymMatrix p = unit_direction(rng, n), q = unit_direction(rng, n);
    const EigenSystem e = eigen_decompose(s);

    const double h1 = 1e-5;
    const double fd1 = (lambda1(s + p * h1) - lambda1(s - p * h1)) / (2.0 * h1);
    const double an1 = frob_pair(d_lambda1(e), p);
    d1.worst = std::max(d1.worst, std::abs(fd1 - an1) / std::max(std::abs(an1), 1.0));

    const double h2 = 1e-4;
    const double fd2 = (lambda1(s + p * h2 + q * h2) - lambda1(s + p * h2 - q * h2) -
                        lambda1(s - p * h2 + q * h2) + lambda1(s - p * h2 - q * h2)) /
                       (4.0 * h2 * h2);
    const double an2 = d2_lambda1(e, p, q);
    d2.worst = std::max(d2.worst, std::abs(fd2 - an2) / std::max(std::abs(an2), 1.0));
    ++d1.cases;
    ++d2.cases;
  }
  out.insert(out.end(), {d1, d2});
}

void h_checks(std::vector<Check>& out, Rng& rng) {
  Check id{"h_second_derivative_identity", 0, 0.0, 1e-12};
  Check bd{"h_first_derivative_bounds", 0, 0.0, 0.0};
  for (int c = 0; c < 10000; ++c) {
    const double s_max = rng.uniform(0.0, 10.0);
    const double s = rng.uniform(0.0, 1.0) * s_max;
    const HValues v = h_eval({s, s_max});
    id.worst = std::max(id.worst, std::abs(v.d2h - 2.0 * v.dh * v.dh));
    if (v.dh < 1.0 / (2.0 + 2.0 * s_max) || v.dh > 0.5) bd.worst += 1.0;
    ++id.cases;
    ++bd.cases;
  }
  out.insert(out.end(), {id, bd});
}

void perturbation_checks(std::vector<Check>& out, Rng& rng) {
  Check top{"perturbation_top_eigenvalue", 0, 0.0, 1e-10};
  Check dom{"perturbation_dominance", 0, 0.0, 1e-12};
  for (int c = 0; c < 200; ++c) {
    const int n = 3 + c % 2;
    const SymMatrix hm = gapped(rng, n);
    const EigenSystem e = eigen_decompose(hm);
    const SymMatrix b = perturbation_B(e.vectors[0], n);
    top.worst = std::max(top.worst, std::abs(lambda1(phi_endomorphism(hm, b)) - e.lambdas[0]));
    ++top.cases;
    for (int r = 0; r < 5; ++r) {
      const SymMatrix moved = hm + unit_direction(rng, n) * rng.uniform(0.0, 0.2);
      const double excess = lambda1(phi_endomorphism(moved, b)) - lambda1(moved);
      dom.worst = std::max(dom.worst, excess);
      ++dom.cases;
    }
  }
  out.insert(out.end(), {top, dom});
}

void lemma_checks(std::vector<Check>& out, Rng& rng) {
  Check c{"lemma_vector_identities", 0, 0.0, 1e-12};
  for (int k = 0; k < 200; ++k) {
    const SymMatrix hm = gapped(rng, 4);
    const EigenSystem e = eigen_decompose(hm);
    const LemmaVectors lv = lemma_vectors(e);
    double mu2 = 0.0, nu2 = 0.0;
    for (int a = 1; a < 4; ++a) mu2 += lv.mu[a] * lv.mu[a];
    for (const auto& z : lv.nu) nu2 += std::norm(z);
    const double w1 =
        1.0 + 0.5 * (hm.bilinear(e.vectors[0], e.vectors[0]) + hm.bilinear(lv.jv1, lv.jv1));
    c.worst = std::max({c.worst, std::abs(dot(lv.jv1, e.vectors[0], 4)),
                        std::abs(norm(lv.jv1, 4) - 1.0), std::abs(mu2 - 1.0),
                        std::abs(nu2 - 1.0), std::abs(lv.w1_norm - w1)});
    ++c.cases;
  }
  out.push_back(c);
}

void field_checks(std::vector<Check>& out, Rng& rng) {
  const GridSpec g = make_grid(1, 16, 8, 17);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  // ξ-quadratics are reproduced exactly, Fourier modes by their discrete symbol
  Check quad{"stencil_xi_quadratic", 0, 0.0, 1e-10};
  Check mode{"stencil_fourier_symbol", 0, 0.0, 1e-9};
  Check slot{"slot_determinant_quadratic", 0, 0.0, 1e-12};
  for (int c = 0; c < 20; ++c) {
    const double a0 = rng.uniform(-1, 1), a1 = rng.uniform(-1, 1), a2 = rng.uniform(0.5, 2);
    const ScalarField f =
        ScalarField::sample(g, [&](double, double, double t) { return a0 + a1 * t + a2 * t * t; });
    const int m = 1 + c % 3;
    const ScalarField w = ScalarField::sample(
        g, [&](double x, double y, double) { return std::cos(kTwoPi * (m * x + y)); });
    const double sym_x = (2.0 * std::cos(kTwoPi * m * g.hx) - 2.0) / (g.hx * g.hx);
    for (int k = 0; k < g.nt; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          const Node nd{i, j, k};
          quad.worst = std::max(quad.worst, std::abs(first_diff(f, nd, Axis::T) -
                                                     (a1 + 2.0 * a2 * g.xi(k))));
          if (!g.is_interior_t(k)) continue;
          quad.worst = std::max(quad.worst, std::abs(second_diff(f, nd, Axis::T, Axis::T) - 2 * a2));
          mode.worst = std::max(mode.worst,
                                std::abs(second_diff(w, nd, Axis::X, Axis::X) - sym_x * w(i, j, k)));
          slot.worst = std::max(slot.worst, std::abs(complex_hessian(f, nd).det() - a2 / 2.0));
        }
    ++quad.cases;
    ++mode.cases;
    ++slot.cases;
  }

  Check io{"mafld_round_trip", 0, 0.0, 0.0};
  const auto path = std::filesystem::temp_directory_path() / "malab_selftest_field.mafld";
  for (int c = 0; c < 3; ++c) {
    ScalarField f(g);
    for (double& v : f.values()) v = rng.uniform(-1e3, 1e3);
    write_field(f, path);
    if (!(read_field(path, g) == f)) io.worst += 1.0;
    ++io.cases;
  }
  std::error_code ec;
  std::filesystem::remove(path, ec);
  out.insert(out.end(), {quad, mode, slot, io});
}

}  // namespace

int cmd_selftest(std::ostream& os) {
  std::vector<Check> checks;
  Rng rng(0x6d616c6162ULL);
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      fn(checks, rng);
    } catch (const std::exception& e) {
      checks.push_back({std::string(name) + " (" + e.what() + ")", 0, 1.0, 0.0});
    }
  };
  guarded("eigen", eigen_checks);
  guarded("derivatives", derivative_checks);
  guarded("h", h_checks);
  guarded("perturbation", perturbation_checks);
  guarded("lemma", lemma_checks);
  guarded("field", field_checks);

  char line[160];
  std::snprintf(line, sizeof line, "%-30s %7s %12s %12s  %s\n", "check", "cases", "worst", "tol",
                "result");
  os << line;
  std::vector<std::string> failing;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-30s %7d %12.3e %12.3e  %s\n", c.name.c_str(), c.cases,
                  c.worst, c.tol, c.pass() ? "PASS" : "FAIL");
    os << line;
    if (!c.pass()) failing.push_back(c.name);
  }
  if (failing.empty()) {
    os << "selftest: PASS (" << checks.size() << " checks)\n";
    return kExitOk;
  }
  os << "selftest: FAIL";
  for (const auto& f : failing) os << ' ' << f;
  os << '\n';
  return kExitSelftest;
}

}  // namespace malab
