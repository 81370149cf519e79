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

#include "doctest.h"
#include "malab/eigencalc.hpp"
#include "test_support.hpp"

using namespace malab;

namespace {

SymMatrix random_sym(testing::Rng& rng, int n) {
  SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s.set(i, j, rng.uniform(-1, 1));
  return s;
}

SymMatrix random_gapped(testing::Rng& rng, int n, double gap) {
  for (;;) {
    SymMatrix s = random_sym(rng, n);
    if (eigen_decompose(s).gap() >= gap) return s;
  }
}

Eigen::MatrixXd dense(const SymMatrix& s) {
  Eigen::MatrixXd m(s.n(), s.n());
  for (int i = 0; i < s.n(); ++i)
    for (int j = 0; j < s.n(); ++j) m(i, j) = s(i, j);
  return m;
}

double top(const SymMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(s));
  return es.eigenvalues().maxCoeff();
}

double pairing(const SymMatrix& a, const SymMatrix& b) {
  return (dense(a).array() * dense(b).array()).sum();
}

SymMatrix unit_dir(testing::Rng& rng, int n) {
  const SymMatrix p = random_sym(rng, n);
  return p * (1.0 / p.frobenius());
}

}  // namespace

TEST_CASE("eigen_decompose: tie and ordering conventions") {
  const EigenSystem id = eigen_decompose(SymMatrix::identity(3));
  for (int a = 0; a < 3; ++a) {
    CHECK(id.lambdas[a] == 1.0);
    for (int i = 0; i < 3; ++i) CHECK(id.vectors[a][i] == doctest::Approx(a == i ? 1.0 : 0.0));
  }
  const EigenSystem d = eigen_decompose(SymMatrix::diagonal({5, 2, 1}));
  CHECK(d.lambdas[0] == 5.0);
  CHECK(d.lambdas[1] == 2.0);
  CHECK(d.lambdas[2] == 1.0);
  for (int a = 0; a < 3; ++a) CHECK(d.vectors[a][a] == doctest::Approx(1.0));
  // unsorted diagonal input
  const EigenSystem u = eigen_decompose(SymMatrix::diagonal({1, 5, 2, 3}));
  CHECK(u.lambdas[0] == 5.0);
  CHECK(u.vectors[0][1] == doctest::Approx(1.0));
  CHECK(u.lambdas[3] == 1.0);
}

TEST_CASE("eigen_decompose agrees with an independent solver") {
  testing::Rng rng(11);
  for (int c = 0; c < 300; ++c) {
    const int n = 2 + c % 3;
    const SymMatrix s = random_sym(rng, n);
    const EigenSystem e = eigen_decompose(s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(s));
    for (int a = 0; a < n; ++a)
      CHECK(std::abs(e.lambdas[a] - es.eigenvalues()(n - 1 - a)) <= 1e-12);
    // reconstruction and orthonormality
    Eigen::MatrixXd v(n, n), l = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      l(a, a) = e.lambdas[a];
      for (int i = 0; i < n; ++i) v(i, a) = e.vectors[a][i];
    }
    CHECK((v * l * v.transpose() - dense(s)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
    // sign convention: first nonzero component positive
    for (int a = 0; a < n; ++a) {
      int i = 0;
      while (i < n && std::abs(e.vectors[a][i]) < 1e-12) ++i;
      CHECK(e.vectors[a][i] > 0.0);
    }
  }
}

TEST_CASE("eigen_decompose rejects non-finite input") {
  SymMatrix s = SymMatrix::identity(3);
  s.set(0, 1, std::nan(""));
  CHECK(testing::error_code_of([&] { eigen_decompose(s); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("perturbation_B") {
  const SymMatrix b4 = perturbation_B({1, 0, 0, 0}, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(b4(i, j) == (i == j && i > 0 ? 1.0 : 0.0));
  const double r = 1.0 / std::sqrt(2.0);
  const SymMatrix b3 = perturbation_B({r, r, 0, 0}, 3);
  CHECK(b3(0, 0) == doctest::Approx(0.5));
  CHECK(b3(1, 1) == doctest::Approx(0.5));
  CHECK(b3(0, 1) == doctest::Approx(-0.5));
  CHECK(b3(2, 2) == doctest::Approx(1.0));
  testing::Rng rng(3);
  for (int c = 0; c < 50; ++c) {
    Vec4 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double nv = norm(v, 4);
    for (double& x : v) x /= nv;
    const Vec4 bv = perturbation_B(v, 4).apply(v);
    CHECK(norm(bv, 4) <= 1e-12);
  }
  CHECK(testing::error_code_of([] { perturbation_B({1, 1, 0, 0}, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("phi_endomorphism keeps the top eigenvalue and makes it simple") {
  const SymMatrix phi = phi_endomorphism(SymMatrix::diagonal({5, 5, 1}), perturbation_B({1, 0, 0, 0}, 3));
  const EigenSystem e = eigen_decompose(phi);
  CHECK(e.lambdas[0] == 5.0);
  CHECK(e.lambdas[1] == 4.0);
  CHECK(e.lambdas[2] == 0.0);
  CHECK(e.gap() == 1.0);
  CHECK(top(phi_endomorphism(SymMatrix::diagonal({5, 2, 1}), perturbation_B({1, 0, 0, 0}, 3))) ==
        doctest::Approx(5.0));

  testing::Rng rng(5);
  for (int c = 0; c < 200; ++c) {
    const int n = 3 + c % 2;
    const SymMatrix h = random_sym(rng, n);
    const EigenSystem eh = eigen_decompose(h);
    const SymMatrix b = perturbation_B(eh.vectors[0], n);
    const EigenSystem ep = eigen_decompose(phi_endomorphism(h, b));
    CHECK(std::abs(ep.lambdas[0] - eh.lambdas[0]) <= 1e-10);
    CHECK(ep.lambdas[1] < ep.lambdas[0]);
    // nearby points: B is positive semidefinite, so lambda1 can only drop
    const SymMatrix moved = h + unit_dir(rng, n) * 0.1;
    CHECK(top(phi_endomorphism(moved, b)) <= top(moved) + 1e-12);
  }
}

TEST_CASE("d_lambda1") {
  const SymMatrix d = d_lambda1(eigen_decompose(SymMatrix::diagonal({5, 2, 1})));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(d(i, j) == doctest::Approx(i == 0 && j == 0 ? 1.0 : 0.0));

  // change of basis: rotate diag(5,2,1) by a known rotation R
  const double th = 0.3, c = std::cos(th), s = std::sin(th);
  Eigen::Matrix3d r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  const Eigen::Matrix3d m = r * Eigen::Vector3d(5, 2, 1).asDiagonal() * r.transpose();
  const SymMatrix rs = SymMatrix::from_rows(3, {m(0, 0), m(0, 1), m(0, 2), m(1, 0), m(1, 1), m(1, 2),
                                                m(2, 0), m(2, 1), m(2, 2)});
  const SymMatrix dr = d_lambda1(eigen_decompose(rs));
  const Eigen::Vector3d re1 = r.col(0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(dr(i, j) == doctest::Approx(re1(i) * re1(j)).epsilon(1e-12));

  // central differences through the independent solver
  testing::Rng rng(17);
  for (int k = 0; k < 200; ++k) {
    const int n = 3 + k % 2;
    const SymMatrix sm = random_gapped(rng, n, 0.1);
    const SymMatrix p = unit_dir(rng, n);
    const double h = 1e-5;
    const double fd = (top(sm + p * h) - top(sm - p * h)) / (2 * h);
    const double an = pairing(d_lambda1(eigen_decompose(sm)), p);
    CHECK(std::abs(fd - an) <= 1e-6 * std::max(std::abs(an), 1.0));
  }
}

TEST_CASE("d2_lambda1") {
  const EigenSystem e = eigen_decompose(SymMatrix::diagonal({5, 2, 1}));
  // E12 symmetrized with entries 1/2: V1'P V2 = 1/2, so 2 (1/2)^2 / 3 = 1/6
  const SymMatrix half = SymMatrix::from_rows(3, {0, 1, 0, 0, 0, 0, 0, 0, 0});
  CHECK(half(0, 1) == 0.5);
  CHECK(d2_lambda1(e, half, half) == doctest::Approx(1.0 / 6.0));
  // Frobenius-unit version (entries 1/sqrt 2) doubles it
  const SymMatrix unit = half * std::sqrt(2.0);
  CHECK(d2_lambda1(e, unit, unit) == doctest::Approx(1.0 / 3.0));
  // both agree with a second difference of the independent solver
  for (const SymMatrix& p : {half, unit}) {
    const double h = 1e-4;
    const SymMatrix s = SymMatrix::diagonal({5, 2, 1});
    const double fd = (top(s + p * h) - 2 * top(s) + top(s - p * h)) / (h * h);
    CHECK(fd == doctest::Approx(d2_lambda1(e, p, p)).epsilon(1e-5));
  }
  const SymMatrix e11 = SymMatrix::diagonal({1, 0, 0});
  CHECK(d2_lambda1(e, e11, e11) == 0.0);

  testing::Rng rng(19);
  for (int k = 0; k < 200; ++k) {
    const int n = 3 + k % 2;
    const SymMatrix sm = random_gapped(rng, n, 0.1);
    const SymMatrix p = unit_dir(rng, n), q = unit_dir(rng, n);
    const double h = 1e-4;
    const double fd = (top(sm + p * h + q * h) - top(sm + p * h - q * h) - top(sm - p * h + q * h) +
                       top(sm - p * h - q * h)) /
                      (4 * h * h);
    const double an = d2_lambda1(eigen_decompose(sm), p, q);
    CHECK(std::abs(fd - an) <= 1e-5 * std::max(std::abs(an), 1.0));
    CHECK(d2_lambda1(eigen_decompose(sm), p, q) == doctest::Approx(d2_lambda1(eigen_decompose(sm), q, p)));
  }
}

TEST_CASE("derivatives refuse a repeated top eigenvalue") {
  const EigenSystem e = eigen_decompose(SymMatrix::diagonal({3, 3, 1}));
  CHECK(testing::error_code_of([&] { d_lambda1(e); }) == ErrorCode::DegenerateEigenvalue);
  const SymMatrix p = SymMatrix::identity(3);
  CHECK(testing::error_code_of([&] { d2_lambda1(e, p, p); }) == ErrorCode::DegenerateEigenvalue);
}

TEST_CASE("h function values and identities") {
  const HValues at_max = h_eval({2.0, 2.0});
  CHECK(at_max.h == 0.0);
  CHECK(at_max.dh == 0.5);
  CHECK(at_max.d2h == 0.5);
  const HValues v = h_eval({1.0, 3.0});
  CHECK(v.h == doctest::Approx(-0.5 * std::log(3.0)));
  CHECK(v.dh == doctest::Approx(1.0 / 6.0));
  CHECK(v.d2h == doctest::Approx(1.0 / 18.0));

  testing::Rng rng(23);
  for (int c = 0; c < 10000; ++c) {
    const double s_max = rng.uniform(0, 10);
    const double s = rng.uniform(0, 1) * s_max;
    const HValues w = h_eval({s, s_max});
    CHECK(std::abs(w.d2h - 2 * w.dh * w.dh) <= 1e-12);
    CHECK(w.dh >= 1.0 / (2 + 2 * s_max));
    CHECK(w.dh <= 0.5);
    if (c % 50 == 0 && s > 1e-3 && s < s_max - 1e-3) {
      const double d = 1e-6;
      const double fd = (h_eval({s + d, s_max}).h - h_eval({s - d, s_max}).h) / (2 * d);
      CHECK(std::abs(fd - w.dh) <= 1e-6);
    }
  }
  CHECK(testing::error_code_of([] { h_eval({2.0, 1.0}); }) == ErrorCode::InvalidArgument);
  CHECK(testing::error_code_of([] { h_eval({-1.0, 1.0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("lemma vectors") {
  // H = diag(3, 1, 2, 0): V1 = e0, J V1 = e1
  const EigenSystem e = eigen_decompose(SymMatrix::diagonal({3, 1, 2, 0}));
  const LemmaVectors lv = lemma_vectors(e);
  CHECK(lv.jv1[1] == doctest::Approx(1.0));
  CHECK(std::abs(lv.nu[0] - std::complex<double>(1, 0)) <= 1e-15);
  CHECK(std::abs(lv.nu[1]) <= 1e-15);
  CHECK(lv.w1_norm == doctest::Approx(1 + 0.5 * (3 + 1)));
  double mu2 = 0;
  for (int a = 1; a < 4; ++a) mu2 += lv.mu[a] * lv.mu[a];
  CHECK(mu2 == doctest::Approx(1.0));

  testing::Rng rng(29);
  for (int c = 0; c < 100; ++c) {
    const SymMatrix h = random_gapped(rng, 4, 0.05);
    const EigenSystem es = eigen_decompose(h);
    const LemmaVectors l = lemma_vectors(es);
    CHECK(std::abs(dot(l.jv1, es.vectors[0], 4)) <= 1e-12);
    CHECK(l.w1_norm == doctest::Approx(1 + 0.5 * (h.bilinear(es.vectors[0], es.vectors[0]) +
                                                  h.bilinear(l.jv1, l.jv1))));
  }
  CHECK(testing::error_code_of([] { lemma_vectors(eigen_decompose(SymMatrix::identity(3))); }) ==
        ErrorCode::InvalidArgument);
}
