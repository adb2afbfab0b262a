#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypocauchy/error.hpp"
#include "hypocauchy/structures.hpp"
#include "support.hpp"

using namespace hypocauchy;

namespace {
const Region kSquare = Region::rectangle(-1, 1, -1, 1);

std::vector<FirstIntegral> all_variants() {
  return {
      FirstIntegral::elliptic(kSquare),
      FirstIntegral::arc_normal(3, kSquare),
      FirstIntegral::arc_normal(5, kSquare),
      FirstIntegral::point_normal(testsupport::poly({{2, 0, 1}, {0, 2, 3}}), kSquare),
      FirstIntegral::circle_normal(3, 0.5),
      FirstIntegral::polynomial_integral(testsupport::stratified_factors().expand(),
                                         Region::rectangle(-1.5, 1.5, -1.5, 1.5)),
  };
}

// Third-derivative scale of Im Z at p; central differences err by about h^2/6 times it.
double third_derivative_scale(const FirstIntegral& z, Point p) {
  const auto* q = z.imaginary_part();
  if (q == nullptr) return 1.0;
  const auto rp = to_rational(p.x, p.y);
  const double qxxx = std::abs(q->d_dx().d_dx().d_dx().eval(rp).get_d());
  const double qyyy = std::abs(q->d_dy().d_dy().d_dy().eval(rp).get_d());
  return 1.0 + std::max(qxxx, qyyy);
}

Point random_interior(const FirstIntegral& z, std::mt19937_64& rng, double margin) {
  const Region& d = z.domain();
  std::uniform_real_distribution<double> ux(d.x_lo() + margin, d.x_hi() - margin);
  std::uniform_real_distribution<double> uy(d.y_lo() + margin, d.y_hi() - margin);
  return {ux(rng), uy(rng)};
}
}  // namespace

TEST_CASE("regions") {
  const Region d = Region::disc({0, 0}, 1);
  CHECK(d.area() == doctest::Approx(std::numbers::pi));
  CHECK(d.contains({1, 0}));
  CHECK_FALSE(d.contains({1, 0.01}));
  CHECK(kSquare.area() == 4.0);
  CHECK(kSquare.distance_to_boundary({0.5, 0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(Region::rectangle(1, 0, 0, 1), Error);
  CHECK_THROWS_AS(Region::disc({0, 0}, -1), Error);
}

TEST_CASE("evaluation of first integrals") {
  const auto arc = FirstIntegral::arc_normal(3, kSquare);
  CHECK(std::abs(arc.eval({0.5, 0.2}) - Complex(0.5, 0.008)) < 1e-15);
  CHECK(FirstIntegral::elliptic(kSquare).eval({1, -1}) == Complex(1, -1));
  CHECK_THROWS_AS(arc.eval({2, 0}), Error);
  CHECK_THROWS_AS(FirstIntegral::arc_normal(2, kSquare), Error);

  const auto p = testsupport::stratified_factors().expand();
  const auto z = FirstIntegral::polynomial_integral(p, Region::rectangle(-4, 4, -4, 4));
  const Rational q01 = antiderivative_y(p).eval(Rational(0), Rational(1));
  CHECK(z.eval({0, 1}).imag() == doctest::Approx(q01.get_d()).epsilon(1e-14));
  CHECK(z.eval({0, 1}).real() == 0.0);
}

TEST_CASE("analytic gradients") {
  const auto e = FirstIntegral::elliptic(kSquare);
  CHECK(e.grad({0.3, -0.4}).first == Complex(1, 0));
  CHECK(e.grad({0.3, -0.4}).second == Complex(0, 1));
  const auto arc = FirstIntegral::arc_normal(3, kSquare);
  const auto [ax, ay] = arc.grad({0.2, 0.5});
  CHECK(ax == Complex(1, 0));
  CHECK(std::abs(ay - Complex(0, 0.75)) < 1e-15);

  const auto p = testsupport::stratified_factors().expand();
  const auto q = antiderivative_y(p);
  const auto z = FirstIntegral::polynomial_integral(p, Region::rectangle(-4, 4, -4, 4));
  const auto [zx, zy] = z.grad({1, 1});
  CHECK(zx.real() == 1.0);
  CHECK(zx.imag() == doctest::Approx(q.d_dx().eval(Rational(1), Rational(1)).get_d()).epsilon(1e-13));
  CHECK(zy == Complex(0, 160));
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(21);
  const double h = 1e-4;
  for (const auto& z : all_variants()) {
    for (int n = 0; n < 100; ++n) {
      const Point p = random_interior(z, rng, 2 * h);
      const auto [gx, gy] = z.grad(p);
      const auto [fx, fy] = central_partials([&](Point q) { return z.eval_unchecked(q); }, p, h, 2);
      const double scale = third_derivative_scale(z, p);
      CHECK(std::abs(gx - fx) < 10 * h * h * scale);
      CHECK(std::abs(gy - fy) < 10 * h * h * scale);
    }
  }
}

TEST_CASE("L annihilates Z and holomorphic composites") {
  std::mt19937_64 rng(4);
  const double h = 1e-4;
  for (const auto& z : all_variants()) {
    for (int n = 0; n < 100; ++n) {
      const Point p = random_interior(z, rng, 2 * h);
      const auto [zx, zy] = z.grad(p);
      CHECK(std::abs(apply_L(z, p, zx, zy)) == 0.0);
      SmoothFunction sq{[&](Point q) { return z.eval_unchecked(q) * z.eval_unchecked(q); }, {}, {}};
      // Z^2 has third derivatives bounded by 6 |Z'| |Z''| + 2 |Z| |Z'''| terms.
      const double g = 1.0 + std::abs(zx) + std::abs(zy) + std::abs(z.eval(p));
      const double scale = g * g * third_derivative_scale(z, p);
      CHECK(std::abs(apply_L(z, sq, p, h)) < 10 * h * h * scale);
    }
  }
}

TEST_CASE("L of coordinate functions") {
  const auto e = FirstIntegral::elliptic(kSquare);
  SmoothFunction x{[](Point p) { return Complex(p.x, 0); }, [](Point) { return Complex(1, 0); },
                   [](Point) { return Complex(0, 0); }};
  CHECK(apply_L(e, x, {0.1, 0.2}, std::nullopt) == Complex(0, -1));
  CHECK(std::abs(apply_L(e, x, {0.1, 0.2}, 1e-4) - Complex(0, -1)) < 1e-10);
  CHECK_THROWS_AS(apply_L(e, x, {0.99995, 0.2}, 1e-4), Error);
}

TEST_CASE("circle chart periodicity and domain invariants") {
  const auto c = FirstIntegral::circle_normal(3, 0.5);
  for (double theta : {0.0, 0.5, 1.0, 3.0, 6.0}) {
    const Complex a = c.eval({theta, 0.3});
    const Complex b = c.eval({theta + 2 * std::numbers::pi, 0.3});
    CHECK(std::abs(a - b) <= 4e-16 * std::abs(a));
  }
  for (const auto& z : all_variants()) {
    const auto inv = check_invariants(z, 10000, 99);
    CHECK(inv.injective);
    CHECK(inv.nondegenerate);
    CHECK(inv.density_nonnegative);
  }
}

TEST_CASE("stable differences") {
  const auto p = testsupport::stratified_factors().expand();
  const auto z = FirstIntegral::polynomial_integral(p, Region::rectangle(-2, 2, -2, 2));
  const auto q = antiderivative_y(p);
  const auto dz = z.delta_at({1, 0});
  // Q(1, t) - Q(1, 0) with exact rationals.
  for (double t : {1e-1, 1e-2, 1e-3}) {
    const double exact = Rational(q.eval(Rational(1), Rational(t)) - q.eval(Rational(1), Rational(0))).get_d();
    CHECK(dz(0, t).imag() == doctest::Approx(exact).epsilon(1e-12));
  }
  const auto c = FirstIntegral::circle_normal(3, 0.5);
  const auto dc = c.delta_at({1.0, 0.1});
  const Complex direct = c.eval({1.3, 0.2}) - c.eval({1.0, 0.1});
  CHECK(std::abs(dc(0.3, 0.1) - direct) < 1e-14);
}
