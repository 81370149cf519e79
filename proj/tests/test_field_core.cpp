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

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "malab/field_io.hpp"
#include "malab/grid.hpp"
#include "malab/stencil.hpp"
#include "test_support.hpp"

using namespace malab;
using testing::kPi;
using testing::kTwoPi;

TEST_CASE("grid construction and validation") {
  const GridSpec g = make_grid(1, 8, 8, 9);
  CHECK(g.hx == 0.125);
  CHECK(g.hy == 0.125);
  CHECK(g.ht == 0.125);
  CHECK(g.size() == 576);
  CHECK(testing::error_code_of([] { make_grid(1, 7, 8, 9); }) == ErrorCode::InvalidArgument);
  CHECK(testing::error_code_of([] { make_grid(2, 8, 8, 9); }) == ErrorCode::InvalidArgument);
  CHECK(testing::error_code_of([] { make_grid(1, 8, 6, 9); }) == ErrorCode::InvalidArgument);
  CHECK(testing::error_code_of([] { make_grid(1, 8, 8, 8); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("index layout is x fastest and wraps periodically") {
  const GridSpec g = make_grid(1, 8, 10, 9);
  CHECK(g.index(1, 0, 0) == 1);
  CHECK(g.index(0, 1, 0) == 8);
  CHECK(g.index(0, 0, 1) == 80);
  CHECK(g.wrap_x(-1) == 7);
  CHECK(g.wrap_x(8) == 0);
  CHECK(g.wrap_y(-11) == 9);
}

TEST_CASE("slices round-trip through a field") {
  const GridSpec g = make_grid(1, 8, 8, 9);
  ScalarField f = ScalarField::sample(g, [](double x, double y, double t) { return x + 2 * y + 3 * t; });
  const SliceField s = extract_slice(f, 4);
  CHECK(s(3, 5) == doctest::Approx(3 * 0.125 + 2 * 5 * 0.125 + 3 * 0.5));
  SliceField z(8, 8, -1.0);
  assign_slice(f, 2, z);
  CHECK(extract_slice(f, 2) == z);
  CHECK(testing::error_code_of([&] { assign_slice(f, 2, SliceField(4, 8)); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("second differences: exact cases") {
  const GridSpec g = make_grid(1, 16, 8, 17);
  const ScalarField c(g, 3.7);
  const ScalarField q = ScalarField::sample(g, [](double, double, double t) { return 2 * t * t; });
  for (int k = 1; k < g.nt - 1; ++k) {
    const Node n{5, 3, k};
    for (Axis a : {Axis::X, Axis::Y, Axis::T})
      for (Axis b : {Axis::X, Axis::Y, Axis::T}) CHECK(second_diff(c, n, a, b) == 0.0);
    CHECK(std::abs(second_diff(q, n, Axis::T, Axis::T) - 4.0) <= 1e-10);
    CHECK(second_diff(q, n, Axis::X, Axis::T) == 0.0);
  }
}

TEST_CASE("second differences converge at second order to analytic derivatives") {
  // f = cos(2 pi x) sin(2 pi y) e^{xi}: all six second derivatives are nonzero
  auto err_at = [](int n) {
    const GridSpec g = make_grid(1, n, n, n + 1);
    const ScalarField f = ScalarField::sample(g, [](double x, double y, double t) {
      return std::cos(kTwoPi * x) * std::sin(kTwoPi * y) * std::exp(t);
    });
    double worst = 0.0;
    for (int k = 1; k < g.nt - 1; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          const double x = g.x(i), y = g.y(j), t = g.xi(k);
          const double cx = std::cos(kTwoPi * x), sx = std::sin(kTwoPi * x);
          const double cy = std::cos(kTwoPi * y), sy = std::sin(kTwoPi * y), e = std::exp(t);
          const double w = kTwoPi * kTwoPi;
          const Node nd{i, j, k};
          worst = std::max({worst,
                            std::abs(second_diff(f, nd, Axis::X, Axis::X) + w * cx * sy * e),
                            std::abs(second_diff(f, nd, Axis::Y, Axis::Y) + w * cx * sy * e),
                            std::abs(second_diff(f, nd, Axis::T, Axis::T) - cx * sy * e),
                            std::abs(second_diff(f, nd, Axis::X, Axis::Y) + w * sx * cy * e),
                            std::abs(second_diff(f, nd, Axis::X, Axis::T) + kTwoPi * sx * sy * e),
                            std::abs(second_diff(f, nd, Axis::Y, Axis::T) - kTwoPi * cx * cy * e)});
        }
    return worst;
  };
  const double e16 = err_at(16), e32 = err_at(32);
  CHECK(e16 / e32 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("cos(2 pi x) on nx = 64: xx-difference at x = 0 within 2% of -4 pi^2") {
  const GridSpec g = make_grid(1, 64, 8, 9);
  const ScalarField f = ScalarField::sample(g, [](double x, double, double) { return std::cos(kTwoPi * x); });
  const double d = second_diff(f, {0, 0, 4}, Axis::X, Axis::X);
  CHECK(std::abs(d / (-4 * kPi * kPi) - 1.0) <= 2e-2);
}

TEST_CASE("xi stencils refuse the Dirichlet layers") {
  const GridSpec g = make_grid(1, 8, 8, 9);
  const ScalarField f(g, 1.0);
  CHECK(testing::error_code_of([&] { second_diff(f, {0, 0, 0}, Axis::T, Axis::T); }) ==
        ErrorCode::Stencil);
  CHECK(testing::error_code_of([&] { second_diff(f, {0, 0, 8}, Axis::X, Axis::T); }) ==
        ErrorCode::Stencil);
  // tangential derivatives are fine on the boundary
  CHECK(second_diff(f, {0, 0, 0}, Axis::X, Axis::X) == 0.0);
}

TEST_CASE("first differences are exact on xi-quadratics, including one-sided layers") {
  const GridSpec g = make_grid(1, 8, 8, 9);
  const ScalarField f = ScalarField::sample(g, [](double, double, double t) { return 1 - 3 * t + 5 * t * t; });
  for (int k = 0; k < g.nt; ++k)
    CHECK(first_diff(f, {2, 2, k}, Axis::T) == doctest::Approx(-3 + 10 * g.xi(k)).epsilon(1e-12));
}

TEST_CASE("complex Hessian slot") {
  const GridSpec g = make_grid(1, 32, 32, 33);
  SUBCASE("zero field") {
    const HermitianSlot s = complex_hessian(ScalarField(g), {3, 4, 5});
    CHECK(s.a == 1.0);
    CHECK(s.b == std::complex<double>(0.0, 0.0));
    CHECK(s.c == 0.0);
  }
  SUBCASE("e^{2 xi}: c = e^{2 xi} within O(ht^2)") {
    const ScalarField f = ScalarField::sample(g, [](double, double, double t) { return std::exp(2 * t); });
    for (int k = 1; k < g.nt - 1; ++k) {
      const HermitianSlot s = complex_hessian(f, {0, 0, k});
      CHECK(s.a == doctest::Approx(1.0));
      CHECK(std::abs(s.c - std::exp(2 * g.xi(k))) <= 2.0 * g.ht * g.ht * std::exp(2 * g.xi(k)));
    }
  }
  SUBCASE("cos(2 pi x): a = 1 - pi^2 cos(2 pi x) within O(hx^2)") {
    const ScalarField f = ScalarField::sample(g, [](double x, double, double) { return std::cos(kTwoPi * x); });
    for (int i = 0; i < g.nx; ++i) {
      const HermitianSlot s = complex_hessian(f, {i, 0, 7});
      CHECK(std::abs(s.a - (1 - kPi * kPi * std::cos(kTwoPi * g.x(i)))) <= 40 * g.hx * g.hx);
      CHECK(std::abs(s.b) == 0.0);
      CHECK(s.c == 0.0);
    }
  }
  SUBCASE("mixed entries: b = (f_xt - i f_yt)/4") {
    const ScalarField fx = ScalarField::sample(g, [](double x, double, double t) { return std::sin(kTwoPi * x) * t; });
    const ScalarField fy = ScalarField::sample(g, [](double, double y, double t) { return std::sin(kTwoPi * y) * t; });
    const Node n{0, 0, 10};
    // at x = y = 0 the mixed derivative is 2 pi (cos(0) = 1) up to the discrete symbol
    const double sym = std::sin(kTwoPi * g.hx) / g.hx;
    CHECK(complex_hessian(fx, n).b.real() == doctest::Approx(sym / 4));
    CHECK(complex_hessian(fx, n).b.imag() == doctest::Approx(0.0));
    CHECK(complex_hessian(fy, n).b.imag() == doctest::Approx(-sym / 4));
  }
  SUBCASE("2 xi^2: a = c = 1, det = 1") {
    const ScalarField f = ScalarField::sample(g, [](double, double, double t) { return 2 * t * t; });
    const HermitianSlot s = complex_hessian(f, {1, 2, 3});
    CHECK(s.det() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.admissible());
  }
}

TEST_CASE("real Hessian") {
  const GridSpec g = make_grid(1, 16, 16, 17);
  const SymMatrix z = real_hessian(ScalarField(g), {1, 1, 1});
  CHECK(z.frobenius() == 0.0);
  const SymMatrix q = real_hessian(
      ScalarField::sample(g, [](double, double, double t) { return 2 * t * t; }), {4, 4, 4});
  CHECK(std::abs(q(2, 2) - 4.0) <= 1e-10);
  CHECK(std::abs(q(0, 0)) + std::abs(q(1, 1)) + std::abs(q(0, 2)) <= 1e-10);
}

TEST_CASE("gradient norm uses the 1/2 normalization") {
  const GridSpec g = make_grid(1, 64, 8, 9);
  CHECK(grad_norm_sq(ScalarField(g), {0, 0, 0}) == 0.0);
  // f = x on a window that does not wrap
  const ScalarField lin = ScalarField::sample(g, [](double x, double, double) { return x; });
  CHECK(grad_norm_sq(lin, {10, 0, 3}) == doctest::Approx(0.5));
  const ScalarField s = ScalarField::sample(g, [](double x, double, double) { return std::sin(kTwoPi * x); });
  CHECK(grad_norm_sq(s, {0, 0, 3}) == doctest::Approx(kTwoPi * kTwoPi / 2).epsilon(4e-3));
}

namespace {

// Independent writer: header text and manual little-endian byte splitting.
std::string hand_encoded(int nx, int ny, int nt, const std::vector<double>& v) {
  std::ostringstream os;
  os << "MAFLD 1 1 " << nx << ' ' << ny << ' ' << nt << '\n';
  for (double d : v) {
    std::uint64_t u;
    std::memcpy(&u, &d, 8);
    for (int b = 0; b < 8; ++b) os.put(static_cast<char>((u >> (8 * b)) & 0xff));
  }
  return os.str();
}

void put_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("MAFLD files") {
  testing::TempDir dir("io");
  const GridSpec g = make_grid(1, 8, 8, 9);

  SUBCASE("zero field: 576 payload values after the header") {
    write_field(ScalarField(g), dir / "z.mafld");
    CHECK(slurp(dir / "z.mafld") == hand_encoded(8, 8, 9, std::vector<double>(576, 0.0)));
  }
  SUBCASE("random field round-trips bit for bit, including signed zero and subnormals") {
    testing::Rng rng(7);
    ScalarField f(g);
    for (double& v : f.values()) v = rng.uniform(-1e6, 1e6);
    f.values()[0] = -0.0;
    f.values()[1] = 4.9e-324;
    write_field(f, dir / "r.mafld");
    const ScalarField back = read_field(dir / "r.mafld", g);
    for (std::size_t n = 0; n < g.size(); ++n)
      CHECK(std::bit_cast<std::uint64_t>(back.values()[n]) ==
            std::bit_cast<std::uint64_t>(f.values()[n]));
  }
  SUBCASE("reads an independently encoded file") {
    std::vector<double> v(576);
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = 0.25 * static_cast<double>(n) - 3.0;
    put_file(dir / "h.mafld", hand_encoded(8, 8, 9, v));
    const ScalarField f = read_field(dir / "h.mafld");
    CHECK(f.grid() == g);
    CHECK(f(1, 0, 0) == -2.75);
    CHECK(f(0, 0, 1) == 0.25 * 64 - 3.0);
  }
  SUBCASE("error taxonomy") {
    const std::string good = hand_encoded(8, 8, 9, std::vector<double>(576, 1.0));
    put_file(dir / "bad_magic", "MAFLX 1 1 8 8 9\n" + good.substr(good.find('\n') + 1));
    CHECK(testing::error_code_of([&] { read_field(dir / "bad_magic"); }) == ErrorCode::MalformedHeader);
    put_file(dir / "garbage", "MAFLD one 1 8 8 9\n");
    CHECK(testing::error_code_of([&] { read_field(dir / "garbage"); }) == ErrorCode::MalformedHeader);
    put_file(dir / "v2", "MAFLD 2 1 8 8 9\n" + good.substr(good.find('\n') + 1));
    CHECK(testing::error_code_of([&] { read_field(dir / "v2"); }) == ErrorCode::UnsupportedVersion);
    put_file(dir / "short", good.substr(0, good.size() - 3));
    CHECK(testing::error_code_of([&] { read_field(dir / "short"); }) == ErrorCode::TruncatedPayload);
    put_file(dir / "long", good + "extra");
    CHECK(testing::error_code_of([&] { read_field(dir / "long"); }) == ErrorCode::DimensionMismatch);
    put_file(dir / "ok", good);
    CHECK(testing::error_code_of([&] { read_field(dir / "ok", make_grid(1, 8, 8, 11)); }) ==
          ErrorCode::DimensionMismatch);
    CHECK(testing::error_code_of([&] { read_field(dir / "missing"); }) == ErrorCode::Io);
  }
}
