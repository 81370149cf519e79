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

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "malab/diagnostics.hpp"
#include "malab/eigencalc.hpp"
#include "malab/oracle.hpp"
#include "malab/stencil.hpp"
#include "test_support.hpp"

using namespace malab;
using testing::kTwoPi;

namespace {

ScalarField quad(const GridSpec& g) {
  return ScalarField::sample(g, [](double, double, double t) { return 2 * t * t; });
}

}  // namespace

TEST_CASE("lambda1 field") {
  const GridSpec g = make_grid(1, 16, 8, 17);
  SUBCASE("2 xi^2 gives 4 everywhere") {
    const EigenField e = hessian_eigen_field(quad(g));
    CHECK(e.max == doctest::Approx(4.0).epsilon(1e-10));
    for (int k = 1; k < g.nt - 1; ++k) CHECK(e.lambda1(2, 3, k) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(std::isnan(e.lambda1(0, 0, 0)));
  }
  SUBCASE("trivial eps solution: max lambda1 = 4 eps e^2 within O(ht^2)") {
    const GridSpec gt = make_grid(1, 8, 8, 65);
    const double eps = 0.01;
    const EigenField e = hessian_eigen_field(trivial_eps_solution(gt, eps));
    // the largest node is one step inside xi = 1
    const double at = 4 * eps * std::exp(2 * (1 - gt.ht));
    CHECK(std::abs(e.max - at) <= 4 * eps * std::exp(2.0) * 2 * gt.ht * gt.ht);
    CHECK(e.argmax.k == gt.nt - 2);
  }
  SUBCASE("trigonometric field matches analytic Hessian eigenvalues at second order") {
    auto err = [](int n) {
      const GridSpec gg = make_grid(1, n, n, n + 1);
      auto f = [](double x, double y, double t) {
        return std::cos(kTwoPi * x) * std::sin(kTwoPi * y) + 0.3 * std::sin(kTwoPi * x) * t * t;
      };
      const EigenField e = hessian_eigen_field(ScalarField::sample(gg, f));
      double worst = 0;
      for (int k = 1; k < gg.nt - 1; k += 3)
        for (int j = 0; j < gg.ny; j += 3)
          for (int i = 0; i < gg.nx; i += 3) {
            const double x = gg.x(i), y = gg.y(j), t = gg.xi(k), w = kTwoPi * kTwoPi;
            const double cx = std::cos(kTwoPi * x), sx = std::sin(kTwoPi * x);
            const double cy = std::cos(kTwoPi * y), sy = std::sin(kTwoPi * y);
            Eigen::Matrix3d h;
            const double fxx = -w * cx * sy - 0.3 * w * sx * t * t, fyy = -w * cx * sy;
            const double fxy = -w * sx * cy, fxt = 0.6 * kTwoPi * cx * t, ftt = 0.6 * sx;
            h << fxx, fxy, fxt, fxy, fyy, 0, fxt, 0, ftt;
            const double l1 = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(h).eigenvalues().maxCoeff();
            worst = std::max(worst, std::abs(e.lambda1(i, j, k) - l1));
          }
      return worst;
    };
    CHECK(err(16) / err(32) == doctest::Approx(4.0).epsilon(0.15));
  }
}

TEST_CASE("probe directions bound lambda1 from below") {
  const GridSpec g = make_grid(1, 16, 16, 17);
  CHECK(probe_lambda_max(quad(g), {3, 3, 5}) == doctest::Approx(4.0));
  const ScalarField f = ScalarField::sample(g, [](double x, double y, double t) {
    return 2 * t * t + 0.05 * std::cos(kTwoPi * x) * std::cos(kTwoPi * y) + 0.02 * std::sin(kTwoPi * x) * t;
  });
  const EigenField e = hessian_eigen_field(f);
  for (int k = 1; k < g.nt - 1; ++k)
    for (int j = 0; j < g.ny; j += 2)
      for (int i = 0; i < g.nx; i += 2) {
        const double probe = probe_lambda_max(f, {i, j, k});
        CHECK(probe <= e.lambda1(i, j, k) + 1e-12);
        CHECK(probe >= 0.95 * e.lambda1(i, j, k));
      }
}

TEST_CASE("Q field") {
  const GridSpec g = make_grid(1, 8, 8, 17);
  const ScalarField f = quad(g);
  const QFieldResult q = q_field(f, QFieldConfig{});
  CHECK(q.excluded == 0);
  CHECK(q.evaluated == static_cast<std::size_t>(64 * 15));
  // closed form: |dPsi|^2 = (4 xi)^2 / 2, s_max at xi = 1 where the one-sided difference is exact
  const double s_max = 8.0;
  for (int k = 1; k < g.nt - 1; ++k) {
    const double t = g.xi(k), s = 8 * t * t;
    const double expect = std::log(4.0) - 0.5 * std::log(1 + s_max - s) - 3.0 * (2 * t * t - 2.0);
    CHECK(q.q(1, 1, k) == doctest::Approx(expect).epsilon(1e-9));
  }
  SUBCASE("invariant under adding a constant") {
    ScalarField shifted = f;
    for (double& v : shifted.values()) v += 12.5;
    const QFieldResult qs = q_field(shifted, QFieldConfig{});
    for (std::size_t n = 0; n < g.size(); ++n) {
      if (std::isnan(q.q.values()[n])) continue;
      CHECK(std::abs(qs.q.values()[n] - q.q.values()[n]) <= 1e-12);
    }
  }
  SUBCASE("nonpositive lambda1 is excluded, not an error") {
    const QFieldResult z = q_field(ScalarField(g), QFieldConfig{});
    CHECK(z.empty_domain());
    CHECK(z.excluded == static_cast<std::size_t>(64 * 15));
  }
  SUBCASE("A must exceed 1") {
    CHECK(testing::error_code_of([&] { q_field(f, QFieldConfig{1.0}); }) == ErrorCode::InvalidArgument);
  }
  SUBCASE("trivial family: sup Q decreases with eps") {
    const GridSpec gt = make_grid(1, 8, 8, 33);
    double prev = 1e300;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const double s = q_field(trivial_eps_solution(gt, eps), QFieldConfig{}).sup;
      CHECK(s < prev);
      CHECK(std::abs(s - std::log(4 * eps * std::exp(2.0))) <= 3.0);
      prev = s;
    }
  }
}

TEST_CASE("plateau test") {
  CHECK(testing::error_code_of([] { plateau_test({{0.1, 1}, {0.01, 1}}); }) == ErrorCode::InvalidArgument);
  const PlateauVerdict flat = plateau_test({{1e-1, 5}, {1e-2, 2}, {1e-3, 2}, {1e-4, 2}});
  CHECK(flat.slope == doctest::Approx(0.0));
  CHECK(flat.pass);
  std::vector<PlateauRow> grow;
  for (double e : {1e-2, 1e-3, 1e-4}) grow.push_back({e, std::log(1 / e)});
  const PlateauVerdict g = plateau_test(grow);
  CHECK(g.slope == doctest::Approx(1.0));
  CHECK_FALSE(g.pass);
  // decreasing series pass; a small late jump fails only through the change rule
  CHECK(plateau_test({{1e-1, 3}, {1e-2, 2}, {1e-3, 1}}).pass);
  const PlateauVerdict jump = plateau_test({{1e-2, 1}, {1e-3, 1}, {1e-4, 1.2}});
  CHECK(jump.last_change == doctest::Approx(0.2));
  CHECK_FALSE(jump.pass);
  // deterministic
  CHECK(plateau_test(grow).slope == g.slope);
}

TEST_CASE("Holder seminorm") {
  const GridSpec g = make_grid(1, 16, 8, 17);
  const ScalarField lin = ScalarField::sample(g, [](double, double, double t) { return 3 * t - 1; });
  CHECK(holder_seminorm(lin, 0.5) <= 1e-12);
  // 2 xi^2: |grad difference| = 4 |dxi|, so the ratio is 4 |dxi|^{1/2}; far
  // random pairs reach dxi = 1 with high probability
  const double hq = holder_seminorm(quad(g), 0.5);
  CHECK(hq <= 4.0 + 1e-9);
  CHECK(hq >= 4.0 * std::sqrt(14.0 / 16.0));
  CHECK(testing::error_code_of([&] { holder_seminorm(lin, 1.0); }) == ErrorCode::InvalidArgument);
  CHECK(holder_seminorm(quad(g), 0.5) == hq);
}

TEST_CASE("Hessian entries are bounded by C lambda1 + C") {
  const GridSpec g = make_grid(1, 16, 16, 17);
  const ScalarField f = ScalarField::sample(g, [](double x, double y, double t) {
    return 2 * t * t + 0.05 * std::cos(kTwoPi * x) * std::sin(kTwoPi * y) + 0.03 * std::cos(kTwoPi * x) * t;
  });
  const HessianBoundCheck b = hessian_bound_check(f);
  CHECK(b.pass);
  CHECK(b.constant >= 2.0);
}

TEST_CASE("rows, verdicts and CSV") {
  const GridSpec g = make_grid(1, 8, 8, 17);
  std::vector<DiagnosticsRow> rows;
  for (double eps : {1e-1, 1e-2, 1e-3}) rows.push_back(diagnostics_row(eps, trivial_eps_solution(g, eps), {}));
  CHECK(rows[0].sup_lambda1 > rows[2].sup_lambda1);
  CHECK(rows[1].min_det / 1e-2 == doctest::Approx(std::exp(2 * g.ht)).epsilon(3e-3));
  CHECK(rows[1].sup_psi == doctest::Approx(1.5157e-2).epsilon(3e-3));
  const auto v = standard_verdicts(rows);
  for (const auto& x : v) CHECK_MESSAGE(x.pass, x.check);
  std::ostringstream os;
  write_csv(os, rows);
  const std::string csv = os.str();
  CHECK(csv.rfind("eps,sup_psi,sup_grad,sup_lap,sup_lambda1,min_det,sup_Q,speed_var,holder\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(standard_verdicts({rows[0], rows[1]}).front().check == "plateau_rows");
}
