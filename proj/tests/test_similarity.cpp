#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypocauchy/error.hpp"
#include "hypocauchy/similarity.hpp"

using namespace hypocauchy;

namespace {
const Region kSquare = Region::rectangle(-1, 1, -1, 1);

FirstIntegral arc3() { return FirstIntegral::arc_normal(3, Region::rectangle(-1.5, 1.5, -1.5, 1.5)); }

QuadratureSpec deep() {
  QuadratureSpec s;
  s.rel_tol = 1e-8;
  s.max_depth = 60;
  s.exclusion_radius_floor = 1e-5;
  return s;
}

const Complex kHalfI{0.0, 0.5};
const Field kZero = [](Point) { return Complex(0.0); };
}  // namespace

TEST_CASE("chi examples and bound") {
  const Complex r = chi({3, 4}, 1e-10);
  CHECK(std::abs(r - Complex(3, -4) / Complex(3, 4)) < 1e-16);
  CHECK(std::abs(r) <= 1.0);
  CHECK(std::abs(r) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(chi(0.0, 1e-10) == Complex(0.0));
  CHECK(chi(Complex(0.5e-10, 0), 1e-10) == Complex(0.0));
  CHECK(chi(Complex(0, 2e-10), 1e-10) == Complex(-1.0));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> e(-300, 300), a(0, 2 * std::numbers::pi);
  for (int i = 0; i < 100000; ++i) {
    const Complex u = std::polar(std::pow(10.0, e(rng) / 10), a(rng));
    CHECK_UNARY(std::abs(chi(u, 0.0)) <= 1.0);
  }
}

TEST_CASE("holomorphic polynomial and grid interpolant") {
  const HolomorphicPolynomial h{{{1, 0}, {0, 2}, {1, 1}}};
  CHECK(h(Complex(3, 0)) == Complex(10, 15));
  CHECK(HolomorphicPolynomial{{}}(Complex(2, 1)) == Complex(0.0));

  // Bilinear data are reproduced exactly inside, held constant outside.
  const Grid g{{-1, -0.2, 0.5, 1}, {-1, 0, 1}};
  auto bil = [](Point p) { return Complex(1 + 2 * p.x - p.y + 0.5 * p.x * p.y, p.x); };
  std::vector<Complex> v;
  for (std::size_t i = 0; i < g.size(); ++i) v.push_back(bil(g.node(i)));
  const GridInterpolant it(g, v);
  for (Point p : {Point{0.1, 0.3}, Point{-0.7, -0.9}, Point{0.99, 0.01}, Point{0.5, 0}})
    CHECK(std::abs(it(p) - bil(p)) < 1e-14);
  CHECK(it({2.0, 3.0}) == bil({1, 1}));
  CHECK_THROWS_AS(GridInterpolant(g, {1.0}), Error);
}

TEST_CASE("zero coefficients give u = H(Z) in one step") {
  const auto z = arc3();
  const HolomorphicPolynomial h{{{1, 0}, {0.5, 0.2}}};
  const Grid grid = Grid::cell_centred(kSquare, 5, 5);
  SimilarityOptions o;
  o.exec = Execution::Serial;
  const auto sol = fixed_point_solve(z, kSquare, h, kZero, kZero, grid, deep(), kHalfI, o);
  CHECK(sol.converged);
  CHECK(sol.iterations == 1);
  CHECK(sol.s_sup == 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(sol.u.values[i] == h(z.eval(grid.node(i))));
  // Central differences of t^3 err by h^2 t''' / 6 = h^2, times |H'| = |0.5 + 0.2i|.
  CHECK(sol.residual_abs <= 1.001 * o.fd_step * o.fd_step * std::abs(Complex(0.5, 0.2)));
  CHECK(sol.residual_abs > 0.9 * o.fd_step * o.fd_step * std::abs(Complex(0.5, 0.2)));

  const auto fac = factor_solution(z, kSquare, sol.u, kZero, kZero, deep(), kHalfI, o, &h);
  CHECK(fac.h_deviation == 0.0);
  CHECK(fac.s.sup_abs() == 0.0);
}

TEST_CASE("B = 0 with constant A: s = a T 1 after one step") {
  const auto z = arc3();
  const Complex a{0.3, -0.1};
  const Field A = [a](Point) { return a; };
  const HolomorphicPolynomial h{{{2, 0}, {0, 0.3}}};
  const Grid grid = Grid::cell_centred(kSquare, 5, 5);
  SimilarityOptions o;
  const auto sol = fixed_point_solve(z, kSquare, h, A, kZero, grid, deep(), kHalfI, o);
  const auto t1 = apply_TZ(z, kSquare, [](Point) { return Complex(1.0); }, grid, deep(), kHalfI);
  CHECK(sol.converged);
  CHECK(sol.iterations == 2);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(sol.s.values[i] - a * t1.values[i]) < 1e-7);
  CHECK(sol.residual_nodes == 20);
  CHECK(sol.residual_max < 5e-2);

  SUBCASE("a constant phase passes through the factorization") {
    const Complex rot = std::polar(1.0, std::numbers::pi / 4);
    OperatorField turned = sol.u;
    for (auto& v : turned.values) v *= rot;
    const auto f0 = factor_solution(z, kSquare, sol.u, A, kZero, deep(), kHalfI, o);
    const auto f1 = factor_solution(z, kSquare, turned, A, kZero, deep(), kHalfI, o);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(std::abs(f1.v.values[i] - rot * f0.v.values[i]) < 1e-13);
    CHECK(f1.holo_residual == doctest::Approx(f0.holo_residual).epsilon(1e-9));
  }
}

TEST_CASE("small smooth coefficients: contraction and round trip") {
  const auto z = arc3();
  const HolomorphicPolynomial h{{{1, 0}, {0.5, 0.2}}};
  const Field A = [](Point p) { return Complex(0.2 + 0.1 * p.x, 0.05 * p.y); };
  const Field B = [](Point p) { return Complex(0.1 * std::cos(p.y), 0.05); };
  const Grid grid = Grid::cell_centred(kSquare, 5, 5);
  const auto sol = fixed_point_solve(z, kSquare, h, A, B, grid, deep(), kHalfI);
  CHECK(sol.converged);
  CHECK(sol.max_contraction < 0.9);
  CHECK(sol.residual_max < 5e-2);
  CHECK(sol.chi_max_abs <= 1.0);
  // Zero-set consistency: |u| >= min |H(Z)| e^{-||s||}.
  double hmin = 1e300;
  for (std::size_t i = 0; i < grid.size(); ++i) hmin = std::min(hmin, std::abs(h(z.eval(grid.node(i)))));
  CHECK(sol.u_min_abs >= hmin * std::exp(-sol.s_sup) * (1 - 1e-12));
  // ||A + B chi||_p <= ||A||_p + ||B||_p.
  const double na = lp_norm(A, kSquare, 4.5, deep()).value, nb = lp_norm(B, kSquare, 4.5, deep()).value;
  CHECK(sol.forcing_norm_p <= na + nb);

  const auto fac = factor_solution(z, kSquare, sol.u, A, B, deep(), kHalfI, {}, &h);
  CHECK(fac.h_deviation < 1e-2);
}

TEST_CASE("similarity input validation") {
  const auto z = arc3();
  const HolomorphicPolynomial h{{{1, 0}}};
  const Grid grid = Grid::cell_centred(kSquare, 3, 3);
  CHECK_THROWS_AS(fixed_point_solve(z, Region::disc({0, 0}, 1), h, kZero, kZero, grid, deep(), kHalfI), Error);
  SimilarityOptions o;
  o.max_iter = 0;
  CHECK_THROWS_AS(fixed_point_solve(z, kSquare, h, kZero, kZero, grid, deep(), kHalfI, o), Error);
  CHECK_THROWS_AS(fixed_point_solve(z, kSquare, HolomorphicPolynomial{}, kZero, kZero, grid, deep(), kHalfI), Error);
  const Grid outside{{0.0, 0.5, 2.0}, {0.0, 0.5, 0.9}};
  CHECK_THROWS_AS(fixed_point_solve(z, kSquare, h, kZero, kZero, outside, deep(), kHalfI), Error);
}
