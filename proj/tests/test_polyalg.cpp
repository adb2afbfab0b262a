#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hypocauchy/polyalg.hpp"
#include "support.hpp"

using namespace hypocauchy;
using testsupport::poly;

namespace {

// Independent univariate arithmetic in test code: integer coefficients, lowest power first.
using Uni = std::vector<Rational>;

Uni umul(const Uni& a, const Uni& b) {
  Uni out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Uni upow(const Uni& a, int n) {
  Uni r{Rational(1)};
  for (int i = 0; i < n; ++i) r = umul(r, a);
  return r;
}

// P(x0, y) as a polynomial in y, built factor by factor.
Uni p_on_vertical(const Rational& x0) {
  const Rational x2 = x0 * x0;
  Uni p{Rational(0), Rational(0), Rational(1)};                       // y^2
  p = umul(p, {x2, Rational(0), Rational(1)});                         // x^2 + y^2
  p = umul(p, upow({x2 - 1, Rational(1)}, 6));                         // (y - 1 + x^2)^6
  p = umul(p, {x2 + 1, Rational(2), Rational(1)});                     // x^2 + (y+1)^2
  p = umul(p, upow({x2 + 8, Rational(-6), Rational(1)}, 2));           // (x^2 + (y-3)^2 - 1)^2
  return p;
}

int lowest_nonzero(const Uni& u) {
  for (std::size_t k = 0; k < u.size(); ++k)
    if (u[k] != 0) return static_cast<int>(k);
  return -1;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 17);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

BivariatePolynomial random_poly(std::mt19937_64& rng, int deg) {
  BivariatePolynomial p;
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j) p += BivariatePolynomial::monomial(i, j, random_rational(rng));
  return p;
}

}  // namespace

TEST_CASE("product of monomial-sum polynomials") {
  const auto a = poly({{0, 2, 1}});
  const auto b = poly({{2, 0, 1}, {0, 2, 1}});
  CHECK(poly_mul(a, b) == poly({{2, 2, 1}, {0, 4, 1}}));
  CHECK(poly_mul(b, BivariatePolynomial(Rational(1))) == b);
  CHECK(poly_mul(b, BivariatePolynomial()).is_zero());
}

TEST_CASE("canonical form drops cancelled terms") {
  auto p = poly({{1, 1, 3}, {0, 0, 2}});
  p -= poly({{1, 1, 3}});
  CHECK(p == poly({{0, 0, 2}}));
  CHECK(p.degree() == 0);
  CHECK(BivariatePolynomial().degree() == -1);
}

TEST_CASE("expanded reference structure") {
  const auto p = testsupport::stratified_factors().expand();
  CHECK(p.degree() == 22);
  // Factor values at (1,1): 1 * 2 * 1 * 5 * 16.
  CHECK(p.eval(Rational(1), Rational(1)) == 160);
  // Exact agreement with the factor-wise evaluation at many rational points.
  std::mt19937_64 rng(7);
  const auto f = testsupport::stratified_factors();
  for (int n = 0; n < 50; ++n) {
    const Rational x = random_rational(rng), y = random_rational(rng);
    Rational prod = 1;
    for (const auto& fac : f.factors) {
      Rational v = fac.base.eval(x, y), r = 1;
      for (unsigned k = 0; k < fac.power; ++k) r *= v;
      prod *= r;
    }
    CHECK(p.eval(x, y) == prod);
  }
}

TEST_CASE("multiplication is exact at random rational points") {
  std::mt19937_64 rng(11);
  const auto a = random_poly(rng, 5);
  const auto b = random_poly(rng, 4);
  const auto ab = poly_mul(a, b);
  for (int n = 0; n < 100; ++n) {
    const Rational x = random_rational(rng), y = random_rational(rng);
    CHECK(ab.eval(x, y) == a.eval(x, y) * b.eval(x, y));
  }
}

TEST_CASE("antiderivative in y") {
  CHECK(antiderivative_y(poly({{0, 2, 1}})) == BivariatePolynomial::monomial(0, 3, Rational(1, 3)));
  CHECK(antiderivative_y(BivariatePolynomial()).is_zero());
  const auto p = testsupport::stratified_factors().expand();
  const auto q = antiderivative_y(p);
  CHECK((q.d_dy() - p).is_zero());
  std::mt19937_64 rng(3);
  for (int n = 0; n < 20; ++n) CHECK(q.eval(random_rational(rng), Rational(0)) == 0);
  const auto r = random_poly(rng, 6);
  CHECK(antiderivative_y(r).d_dy() == r);
}

TEST_CASE("Q(0,1) matches an independent univariate integral") {
  const auto q = antiderivative_y(testsupport::stratified_factors().expand());
  const Uni p0 = p_on_vertical(Rational(0));
  Rational integral = 0;
  for (std::size_t k = 0; k < p0.size(); ++k) integral += p0[k] / Rational(static_cast<long>(k + 1));
  CHECK(q.eval(Rational(0), Rational(1)) == integral);
}

TEST_CASE("vanishing orders along vertical lines") {
  CHECK(vanishing_order(poly({{0, 3, 1}}), {0, 0}, Axis::Y).value == 3);
  CHECK(vanishing_order(poly({{1, 0, 1}}), {0, 0}, Axis::Y).infinite);
  CHECK(vanishing_order(poly({{1, 0, 1}, {0, 0, 1}}), {0, 0}, Axis::Y).value == 0);

  const auto q = antiderivative_y(testsupport::stratified_factors().expand());
  for (long x0 : {2L, 1L, -1L, 0L, 3L}) {
    const Uni p = p_on_vertical(Rational(x0));
    const int expected = 1 + lowest_nonzero(p);
    CHECK(transversal_order(q, {Rational(x0), Rational(0)}, Axis::Y).value == expected);
  }
  CHECK(transversal_order(q, {Rational(2), Rational(0)}).value == 3);
  CHECK(transversal_order(q, {Rational(1), Rational(0)}).value == 9);
  CHECK(transversal_order(q, {Rational(0), Rational(0)}).value == 5);
}

TEST_CASE("vanishing order is additive under products") {
  std::mt19937_64 rng(5);
  const auto a = poly({{0, 2, 1}, {1, 2, 3}});
  const auto b = poly({{0, 1, 1}, {0, 0, -1}, {2, 0, 1}});
  for (int n = 0; n < 10; ++n) {
    RationalPoint pt{Rational(n % 3 - 1), Rational(0)};
    const auto oa = vanishing_order(a, pt);
    const auto ob = vanishing_order(b, pt);
    if (!oa.infinite && !ob.infinite) CHECK(vanishing_order(poly_mul(a, b), pt).value == oa.value + ob.value);
  }
  const auto r1 = random_poly(rng, 3), r2 = random_poly(rng, 3);
  const RationalPoint pt{random_rational(rng), random_rational(rng)};
  CHECK(vanishing_order(poly_mul(r1, r2), pt).value ==
        vanishing_order(r1, pt).value + vanishing_order(r2, pt).value);
}

TEST_CASE("shift and derivatives") {
  std::mt19937_64 rng(9);
  const auto p = random_poly(rng, 5);
  const Rational x0 = random_rational(rng), y0 = random_rational(rng);
  const auto s = p.shifted(x0, y0);
  for (int n = 0; n < 20; ++n) {
    const Rational x = random_rational(rng), y = random_rational(rng);
    CHECK(s.eval(x, y) == p.eval(x + x0, y + y0));
  }
  CHECK(poly({{3, 2, 1}}).d_dx() == poly({{2, 2, 3}}));
  CHECK(poly({{3, 2, 1}}).d_dy() == poly({{3, 1, 2}}));
  CHECK(poly({{1, 0, 1}, {0, 0, 1}}).pow(3) == poly({{3, 0, 1}, {2, 0, 3}, {1, 0, 3}, {0, 0, 1}}));
}

TEST_CASE("double evaluator agrees with exact evaluation") {
  const auto p = testsupport::stratified_factors().expand();
  const PolyEvaluator ev(p);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int n = 0; n < 200; ++n) {
    const double x = u(rng), y = u(rng);
    const double exact = p.eval(Rational(x), Rational(y)).get_d();
    // Error bound of the per-variable scheme: one rounding per row value.
    double abs_sum = 0.0;
    for (const auto& [e, c] : p.terms())
      abs_sum += std::abs(c.get_d()) * std::pow(std::abs(x), e.first) * std::pow(std::abs(y), e.second);
    CHECK(std::abs(ev(x, y) - exact) <= 2e-16 * std::abs(exact) + 4e-16 * abs_sum);
  }
  CHECK(ev(1.0, 1.0) == 160.0);
}
