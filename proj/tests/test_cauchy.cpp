#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypocauchy/cauchy.hpp"
#include "hypocauchy/error.hpp"

using namespace hypocauchy;

namespace {
constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};
const Region kSquare = Region::rectangle(-1, 1, -1, 1);
const Region kDisc = Region::disc({0, 0}, 1.0);

FirstIntegral arc3() { return FirstIntegral::arc_normal(3, Region::rectangle(-1.5, 1.5, -1.5, 1.5)); }
FirstIntegral plane() { return FirstIntegral::elliptic(Region::rectangle(-2, 2, -2, 2)); }

QuadratureSpec tight(double rel = 1e-9) {
  QuadratureSpec s;
  s.rel_tol = rel;
  return s;
}

QuadratureSpec deep(double floor) {
  QuadratureSpec s;
  s.rel_tol = 1e-6;
  s.max_depth = 60;
  s.exclusion_radius_floor = floor;
  return s;
}
}  // namespace

TEST_CASE("kernel values and antisymmetry") {
  const auto e = plane();
  CHECK(eval_kernel(e, {0, 0}, {1, 0}) == Complex(1.0, 0.0));
  CHECK(std::abs(eval_kernel(e, {0, 0}, {0, 1}) - (-kI)) < 1e-15);
  // Z(0, 0.1) - Z(0, 0) = 0.001 i for Z = s + i t^3.
  CHECK(std::abs(eval_kernel(arc3(), {0, 0}, {0, 0.1}) - Complex(0, -1000)) < 1e-9);
  CHECK_THROWS_AS(eval_kernel(arc3(), {0.3, 0.2}, {0.3, 0.2}), Error);
  // Points with equal s and t of opposite sign are distinct under t^3.
  CHECK_NOTHROW(eval_kernel(arc3(), {0.3, 0.2}, {0.3, -0.2}));

  const auto z = arc3();
  const Point pts[] = {{0.1, 0.2}, {-0.4, 0.0}, {0.7, -0.3}, {0.0, 0.5}, {0.25, 0.0}};
  for (const auto& a : pts)
    for (const auto& b : pts) {
      if (a == b) continue;
      // Translated differences are antisymmetric to rounding, not bitwise.
      const Complex k = eval_kernel(z, a, b);
      CHECK(std::abs(k + eval_kernel(z, b, a)) <= 1e-14 * std::abs(k));
    }
}

TEST_CASE("elliptic kernel norm has a closed form at the disc centre") {
  for (double q : {1.0, 1.5}) {
    const auto r = kernel_Lq_norm(plane(), kDisc, q, {0, 0}, tight());
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::pow(2 * kPi / (2 - q), 1 / q)).epsilon(1e-8));
  }
  // Above the integrability threshold the shells stop decaying.
  const auto bad = kernel_Lq_norm(plane(), kDisc, 2.0, {0, 0}, tight());
  CHECK_FALSE(bad.converged);
}

TEST_CASE("kernel norms settle below the threshold and diverge above it") {
  const std::vector<Point> pts{{0, 0}, {0.4, 0}, {0.3, 0.5}};
  const auto below = kernel_sup_experiment(arc3(), kSquare, 1.25, pts, deep(1e-4), 100, Execution::Serial);
  CHECK(below.all_converged);
  CHECK(below.refinement_ratio == doctest::Approx(1.0).epsilon(0.01));
  CHECK(below.sigma_point_ratio == doctest::Approx(1.0).epsilon(0.01));
  const auto above = kernel_sup_experiment(arc3(), kSquare, 1.5, pts, deep(1e-4), 100, Execution::Serial);
  CHECK(above.sigma_point_ratio > 2.0);
  // The elliptic point (0.3, 0.5) is unaffected by the threshold.
  CHECK(above.fine[2].value == doctest::Approx(above.coarse[2].value).epsilon(1e-4));
}

TEST_CASE("T of the constant on the unit disc is conj(z)") {
  // (-1/pi) int_D dA / (zeta - z) = conj(z) for |z| < 1 (Lebesgue measure).
  const Field one = [](Point) { return Complex(1.0); };
  const Grid g{{-0.5, 0.0, 0.3}, {-0.2, 0.0, 0.6}};
  const auto u = apply_TZ(plane(), kDisc, one, g, tight(1e-10), 1.0, 2.0, Execution::Serial);
  CHECK(u.all_converged());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point p = g.node(i);
    CHECK(std::abs(u.values[i] - Complex(p.x, -p.y)) < 1e-9);
  }
}

TEST_CASE("operator is linear and serial equals parallel") {
  const auto z = arc3();
  const Field f = [](Point p) { return Complex(1.0 + p.x, 0.0); };
  const Field g = [](Point p) { return Complex(std::cos(p.y), p.x * p.y); };
  const Complex a{2.0, -1.0}, b{0.0, 0.5};
  const Field h = [&](Point p) { return a * f(p) + b * g(p); };
  const Grid grid = Grid::cell_centred(kSquare, 3, 3);
  const auto spec = tight(1e-9);
  const auto tf = apply_TZ(z, kSquare, f, grid, spec, 1.0, 2.0, Execution::Serial);
  const auto tg = apply_TZ(z, kSquare, g, grid, spec, 1.0, 2.0, Execution::Serial);
  const auto th = apply_TZ(z, kSquare, h, grid, spec, 1.0, 2.0, Execution::Parallel);
  const auto th_serial = apply_TZ(z, kSquare, h, grid, spec, 1.0, 2.0, Execution::Serial);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(th.values[i] - (a * tf.values[i] + b * tg.values[i])) < 1e-7 * (1 + std::abs(th.values[i])));
    CHECK(th.values[i] == th_serial.values[i]);
  }
}

TEST_CASE("pointwise values obey the Hoelder bound") {
  const auto z = arc3();
  // q = 1.2 keeps the kernel well inside its integrability range 1 + 1/3.
  const double p = 6.0, q = p / (p - 1);
  const Field f = [](Point s) { return Complex(std::pow(std::abs(s.x), -0.1), 0.0); };
  QuadratureSpec spec = deep(1e-5);
  spec.singular_lines.push_back({true, 0.0});
  const Grid grid = Grid::lattice(kSquare, 3, 3);
  const Complex c{0, 0.5};
  const auto u = apply_TZ(z, kSquare, f, grid, spec, c, p, Execution::Serial);
  CHECK(u.all_converged());
  CHECK(u.f_norm_p == doctest::Approx(std::pow(4.0 / (1 - 0.1 * p), 1 / p)).epsilon(1e-5));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = kernel_Lq_norm(z, kSquare, q, grid.node(i), spec);
    CHECK(std::abs(u.values[i]) <= k.value * u.f_norm_p * std::abs(c) / kPi);
  }
}

TEST_CASE("calibration in the elliptic model gives i/2") {
  // L = d/dy - i d/dx = -2i d/d(conj z) and T 1 = conj(z), so L(T 1) = -2i.
  const auto c = calibrate_normalization(FirstIntegral::elliptic(Region::disc({0, 0}, 1.5)), kDisc, tight(1e-10));
  CHECK(std::abs(c - Complex(0, 0.5)) < 1e-6);
  // A non-constant forcing reproduces itself with the frozen constant.
  const Field f = [](Point p) { return Complex(p.x, 0.0); };
  const auto u = apply_TZ(plane(), kSquare, f, Grid::cell_centred(kSquare, 5, 5), tight(1e-10), c, 2.0,
                          Execution::Serial);
  const auto res = verify_solution(plane(), kSquare, f, u, 1e-3, 0.0, Execution::Serial);
  CHECK(res.nodes_checked == 25);
  // Nodes on x = 0 have f = 0 and are measured against 1e-3 max|f|.
  CHECK(res.max_relative < 1e-3);
  CHECK(res.median_relative < 1e-5);
}

TEST_CASE("solution residual on a cusp structure") {
  const auto z = arc3();
  const Field f = [](Point p) { return Complex(1.0 + 0.5 * p.x, 0.3 * std::cos(p.x) * std::sin(p.y)); };
  const Grid grid = Grid::cell_centred(kSquare, 5, 5);
  const auto u = apply_TZ(z, kSquare, f, grid, tight(1e-8), Complex(0, 0.5), 2.0);
  const auto res = verify_solution(z, kSquare, f, u, 1e-3, 0.1);
  CHECK(res.nodes_checked == 20);  // the row t = 0 lies in the band
  CHECK(res.median_relative < 5e-2);
  CHECK(std::isnan(res.relative[2]));
}

TEST_CASE("Cauchy formula reconstructs boundary-only and two-term cases") {
  const Complex c{0, 0.5};
  const std::vector<Point> pts{{0, 0}, {0.3, 0}, {-0.5, 0.2}, {0.4, -0.6}, {-0.2, -0.8}};
  SUBCASE("elliptic z^2 on the disc") {
    const SmoothFunction w{[](Point p) { return std::pow(Complex(p.x, p.y), 2); },
                           [](Point p) { return 2.0 * Complex(p.x, p.y); },
                           [](Point p) { return 2.0 * kI * Complex(p.x, p.y); }};
    const auto chk = cauchy_formula_check(plane(), kDisc, w, {{0, 0}, {0.3, -0.4}, {-0.6, 0.1}}, tight(), c);
    CHECK(chk.skipped == 0);
    CHECK(chk.max_rel_error < 1e-6);
  }
  const auto z = arc3();
  SUBCASE("Z^2 needs only the boundary term") {
    const SmoothFunction w{[&](Point p) { return std::pow(z.eval(p), 2); },
                           [&](Point p) { return 2.0 * z.eval(p) * z.grad(p).first; },
                           [&](Point p) { return 2.0 * z.eval(p) * z.grad(p).second; }};
    const auto chk = cauchy_formula_check(z, kSquare, w, pts, tight(), c);
    CHECK(chk.points.size() == pts.size());
    CHECK(chk.max_rel_error < 1e-4);
  }
  SUBCASE("w = s uses the area term with Lw = -3 i t^2") {
    const SmoothFunction w{[](Point p) { return Complex(p.x); }, [](Point) { return Complex(1.0); },
                           [](Point) { return Complex(0.0); }};
    CHECK(std::abs(apply_L(z, w, {0.2, 0.5}, std::nullopt) - Complex(0, -0.75)) < 1e-15);
    const auto chk = cauchy_formula_check(z, kSquare, w, pts, tight(), c);
    CHECK(chk.max_rel_error < 1e-3);
  }
  SUBCASE("points too close to the boundary are skipped") {
    const SmoothFunction w{[](Point p) { return Complex(p.x); }, [](Point) { return Complex(1.0); },
                           [](Point) { return Complex(0.0); }};
    const auto chk = cauchy_formula_check(z, kSquare, w, {{0.1, 0.1}, {1.0 - 1e-9, 0.0}}, tight(), c);
    CHECK(chk.skipped == 1);
    CHECK(chk.points.size() == 1);
  }
}

TEST_CASE("T of an L1 forcing") {
  SUBCASE("constant forcing matches the operator on the same grids") {
    const Field one = [](Point) { return Complex(1.0); };
    const auto rep = TZ_of_L1_function(plane(), kSquare, one, 2.0, tight(), 1.0, 4, Execution::Serial);
    const auto u = apply_TZ(plane(), kSquare, one, Grid::cell_centred(kSquare, 8, 8), tight(), 1.0, 2.0,
                            Execution::Serial);
    double sum = 0;
    for (const auto& v : u.values) sum += std::norm(v) * (4.0 / 64.0);
    CHECK(rep.norm_fine == doctest::Approx(std::sqrt(sum)).epsilon(1e-10));
    CHECK(rep.stable);
  }
  const auto z = arc3();
  QuadratureSpec spec = deep(1e-5);
  spec.rel_tol = 1e-4;
  SUBCASE("|s|^-0.9 is stable for q = 1.25") {
    // Even grids keep nodes off s = 0, where T f itself is infinite.
    spec.singular_lines.push_back({true, 0.0});
    const Field f = [](Point p) { return Complex(std::pow(std::abs(p.x), -0.9), 0.0); };
    const auto rep = TZ_of_L1_function(z, kSquare, f, 1.25, spec, Complex(0, 0.5), 10);
    CHECK(rep.all_converged);
    CHECK(std::isfinite(rep.norm_fine));
    CHECK(rep.stable);
  }
  SUBCASE("forcing concentrated at a characteristic point") {
    // f = (|s| + |t|^3)^-1.3 is integrable; under s ~ l, t ~ l^(1/3) T f ~ rho^(1/3 - 1.3), so
    // |T f|^q is integrable for q = 1.25 and not for q = 1.5.
    spec.singular_points.push_back({0, 0});
    const Field f = [](Point p) { return Complex(std::pow(std::abs(p.x) + std::pow(std::abs(p.y), 3), -1.3), 0.0); };
    const auto below = TZ_of_L1_function(z, kSquare, f, 1.25, spec, Complex(0, 0.5), 10);
    const auto above = TZ_of_L1_function(z, kSquare, f, 1.5, spec, Complex(0, 0.5), 10);
    CHECK(below.stable);
    CHECK_FALSE(above.stable);
    CHECK(above.norm_fine > above.norm_coarse);
  }
  CHECK_THROWS_AS(TZ_of_L1_function(plane(), kSquare, [](Point) { return Complex(1.0); }, 0.5, tight(), 1.0),
                  Error);
}
