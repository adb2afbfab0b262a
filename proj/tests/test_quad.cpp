#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "hypocauchy/error.hpp"
#include "hypocauchy/quad.hpp"

using namespace hypocauchy;

namespace {
constexpr double kPi = std::numbers::pi;

// Independent oracle: nested double-exponential quadrature, endpoint singularities allowed.
template <class F>
double nested(F f, double x0, double x1, double y0, double y1) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double x) { return ts.integrate([&](double y) { return f(x, y); }, y0, y1); }, x0, x1);
}

Complex radial(Point p, Point c, double q) { return std::pow(std::hypot(p.x - c.x, p.y - c.y), -q); }
}  // namespace

TEST_CASE("area of the unit disc and exactness of the base rule") {
  QuadratureSpec spec;
  const auto r = integrate([](Point) { return Complex(1.0); }, Region::disc({0, 0}, 1), spec);
  CHECK(r.converged);
  CHECK(r.value.real() == doctest::Approx(kPi).epsilon(1e-12));

  // x^2 y^3 + x^5 - 3 x y + 2 on [0, 2] x [-1, 1.5]: exact value by antiderivatives.
  auto p = [](Point q) { return Complex(q.x * q.x * q.y * q.y * q.y + std::pow(q.x, 5) - 3 * q.x * q.y + 2); };
  const double exact = (8.0 / 3.0) * (std::pow(1.5, 4) - 1) / 4 + (64.0 / 6.0) * 2.5 - 3 * 2 * (2.25 - 1) / 2 + 2 * 2 * 2.5;
  const auto single = integrate(p, Region::rectangle(0, 2, -1, 1.5), spec);
  CHECK(single.cells_used == 1);
  CHECK(std::abs(single.value.real() - exact) <= 1e-13 * std::abs(exact));
}

TEST_CASE("radial singularity at the disc centre") {
  QuadratureSpec spec;
  spec.singular_points = {{0, 0}};
  const auto r = integrate([](Point p) { return radial(p, {0, 0}, 1.5); }, Region::disc({0, 0}, 1), spec);
  CHECK(r.converged);
  CHECK(r.value.real() == doctest::Approx(4 * kPi).epsilon(1e-9));
}

TEST_CASE("non-integrable singularity is reported, with growth as the floor shrinks") {
  QuadratureSpec spec;
  spec.singular_points = {{0, 0}};
  double previous = 0;
  for (double floor : {1e-3, 1e-5, 1e-7}) {
    spec.exclusion_radius_floor = floor;
    const auto r = integrate([](Point p) { return radial(p, {0, 0}, 2.5); }, Region::disc({0, 0}, 1), spec);
    CHECK_FALSE(r.converged);
    CHECK(r.diverging);
    CHECK(r.value.real() > 5 * previous);
    previous = r.value.real();
  }
}

TEST_CASE("off-centre singular points against nested oracles") {
  QuadratureSpec spec;
  spec.singular_points = {{0.3, 0.2}};
  auto f = [](double x, double y) { return std::pow(std::hypot(x - 0.3, y - 0.2), -1.5); };
  const double oracle = nested(f, -1, 0.3, -1, 0.2) + nested(f, -1, 0.3, 0.2, 1) + nested(f, 0.3, 1, -1, 0.2) +
                        nested(f, 0.3, 1, 0.2, 1);
  const auto r = integrate([&](Point p) { return Complex(f(p.x, p.y)); }, Region::rectangle(-1, 1, -1, 1), spec);
  CHECK(r.converged);
  CHECK(r.value.real() == doctest::Approx(oracle).epsilon(1e-7));

  const auto d = integrate([&](Point p) { return Complex(f(p.x, p.y)); }, Region::disc({0, 0}, 1), spec);
  CHECK(d.converged);
  // Disc oracle in polar coordinates around the singular point: r^(-1/2) times the ray length.
  boost::math::quadrature::tanh_sinh<double> ts;
  const double cx = 0.3, cy = 0.2;
  const double disc_oracle = ts.integrate(
      [&](double th) {
        const double b = cx * std::cos(th) + cy * std::sin(th);
        const double len = -b + std::sqrt(b * b + 1 - cx * cx - cy * cy);
        return 2 * std::sqrt(len);
      },
      0.0, 2 * kPi);
  CHECK(d.value.real() == doctest::Approx(disc_oracle).epsilon(1e-7));
}

TEST_CASE("anisotropic cusp singularity") {
  QuadratureSpec spec;
  spec.singular_points = {{0, 0}};
  spec.max_depth = 60;
  spec.exclusion_radius_floor = 1e-5;
  auto f = [](double s, double t) { return std::pow(s * s + std::pow(t, 6), -0.625); };
  // Oracle: s = a sinh(u) with a = t^3 makes the inner integral smooth; t = v^4 removes the
  // integrable t^(-3/4) blow-up of the outer one.
  boost::math::quadrature::tanh_sinh<double> ts;
  const double oracle = 4 * ts.integrate(
                                [&](double v) {
                                  v = std::max(v, 1e-20);
                                  const double a = std::pow(v, 12);
                                  const double inner = ts.integrate(
                                      [](double u) { return std::pow(std::cosh(u), -0.25); }, 0.0, std::asinh(1 / a));
                                  return 4 * std::pow(v, 3) * std::pow(a, -0.25) * inner;
                                },
                                0.0, 1.0);
  for (double rel : {1e-3, 1e-6}) {
    spec.rel_tol = rel;
    const auto r = integrate([&](Point p) { return Complex(f(p.x, p.y)); }, Region::rectangle(-1, 1, -1, 1), spec);
    CHECK(r.converged);
    CHECK(std::abs(r.value.real() - oracle) <= std::max(r.error_estimate, 1e-12));
  }
}

TEST_CASE("singular lines through a graded map") {
  QuadratureSpec spec;
  spec.singular_lines = {{true, 0.0}};
  const auto r = integrate([](Point p) { return Complex(std::pow(std::abs(p.x), -0.9)); },
                           Region::rectangle(-1, 1, -1, 1), spec);
  CHECK(r.converged);
  CHECK(r.value.real() == doctest::Approx(40.0).epsilon(1e-10));

  // Line plus a point singularity sitting on it.
  spec.singular_points = {{0.0, 0.25}};
  auto g = [](double x, double y) { return std::pow(std::abs(x), -0.5) * std::pow(std::hypot(x, y - 0.25), -0.5); };
  const double oracle = nested(g, -1, 0, -1, 0.25) + nested(g, -1, 0, 0.25, 1) + nested(g, 0, 1, -1, 0.25) +
                        nested(g, 0, 1, 0.25, 1);
  const auto r2 = integrate([&](Point p) { return Complex(g(p.x, p.y)); }, Region::rectangle(-1, 1, -1, 1), spec);
  CHECK(r2.converged);
  CHECK(r2.value.real() == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("refinement never loses more than the previous error estimate") {
  QuadratureSpec spec;
  spec.singular_points = {{0.1, -0.2}};
  auto f = [](Point p) { return radial(p, {0.1, -0.2}, 1.2) + std::exp(p.x); };
  auto prev = integrate(f, Region::rectangle(-1, 1, -1, 1), spec);
  for (int k = 0; k < 4; ++k) {
    spec.rel_tol *= 0.5;
    spec.abs_tol *= 0.5;
    const auto next = integrate(f, Region::rectangle(-1, 1, -1, 1), spec);
    CHECK(next.value.real() >= prev.value.real() - prev.error_estimate);
    prev = next;
  }
}

TEST_CASE("results are bit-reproducible") {
  QuadratureSpec spec;
  spec.singular_points = {{0, 0}, {0.5, 0.5}};
  auto f = [](Point p) { return Complex(1.0, p.x) / Complex(p.x, p.y * p.y * p.y); };
  const auto a = integrate(f, Region::rectangle(-1, 1, -1, 1), spec);
  const auto b = integrate(f, Region::rectangle(-1, 1, -1, 1), spec);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
}

TEST_CASE("one-dimensional rule") {
  const auto r = integrate_1d([](double x) { return Complex(1.0 / std::sqrt(x)); }, 0, 1);
  CHECK(r.converged);
  CHECK(r.value.real() == doctest::Approx(2.0).epsilon(1e-9));
  Spec1D s;
  s.breakpoints = {0.5};
  const auto k = integrate_1d([](double x) { return Complex(std::abs(x - 0.5)); }, 0, 1, s);
  CHECK(k.value.real() == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("quasi-homogeneous integral") {
  QuadratureSpec spec;
  // Degenerate tau = 1: polar closed form 2 pi rho^(2-q) / (2-q).
  const auto one = integrate_quasihomogeneous(1.0, 1.5, 1.0, spec);
  CHECK(one.value.real() == doctest::Approx(2 * kPi / 0.5).epsilon(1e-10));
  const auto small = integrate_quasihomogeneous(1.0, 1.3, 0.3, spec);
  CHECK(small.value.real() == doctest::Approx(2 * kPi * std::pow(0.3, 0.7) / 0.7).epsilon(1e-10));

  // Original coordinates, nested oracle over the quarter disc. The inner integral is taken
  // in u = s / eta, with the tail beyond u = 1e6 from its asymptotic expansion.
  const double tau = 1.0 / 3.0, q = 1.2, rho = 0.1;
  boost::math::quadrature::tanh_sinh<double> ts;
  const double h_inf = std::sqrt(kPi) * std::tgamma((q - 1) / 2) / (2 * std::tgamma(q / 2));
  auto h = [&](double x) {
    if (x <= 1e6) return ts.integrate([&](double u) { return std::pow(1 + u * u, -q / 2); }, 0.0, x);
    return h_inf - std::pow(x, 1 - q) / (q - 1) + (q / 2) * std::pow(x, -1 - q) / (q + 1);
  };
  const double oracle = 4 * ts.integrate(
                                [&](double t) {
                                  const double smax = std::sqrt(rho * rho - t * t);
                                  const double log_eta = std::log(t) / tau;
                                  const double x = std::exp(std::log(smax) - log_eta);
                                  return std::exp((1 - q) * log_eta) * (std::isfinite(x) ? h(x) : h_inf);
                                },
                                0.0, rho);
  const auto r = integrate_quasihomogeneous(tau, q, rho, spec);
  CHECK(r.converged);
  CHECK(r.value.real() == doctest::Approx(oracle).epsilon(1e-6));

  CHECK_THROWS_AS(integrate_quasihomogeneous(1.0 / 3, 1.4, 0.1, spec), Error);
  CHECK_THROWS_AS(integrate_quasihomogeneous(1.5, 1.2, 0.1, spec), Error);
}

TEST_CASE("substitution agrees with direct integration for smooth weights") {
  QuadratureSpec spec;
  auto g = [](double s, double t) { return std::cos(s) + t * t + 0.3 * t + s * t; };
  for (double tau : {1.0 / 3.0, 0.5, 1.0}) {
    const auto sub = integrate_quasihomogeneous_weighted(tau, 0.0, 0.5, g, spec);
    const auto direct = integrate([&](Point p) { return Complex(g(p.x, p.y)); }, Region::disc({0, 0}, 0.5), spec);
    CHECK(sub.value.real() == doctest::Approx(direct.value.real()).epsilon(1e-8));
  }
}

TEST_CASE("invalid specifications") {
  QuadratureSpec spec;
  spec.rel_tol = 0;
  CHECK_THROWS_AS(integrate([](Point) { return Complex(1); }, Region::disc({0, 0}, 1), spec), Error);
  QuadratureSpec lines;
  lines.singular_lines = {{true, 0.0}};
  CHECK_THROWS_AS(integrate([](Point) { return Complex(1); }, Region::disc({0, 0}, 1), lines), Error);
}
