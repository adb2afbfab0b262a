#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "hypocauchy/polyalg.hpp"

namespace hypocauchy {

using Complex = std::complex<double>;

/// A point of the plane; in chart coordinates x plays s (or theta) and y plays t.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Closed rectangle or disc used as a domain, an integration region and a sampling box.
class Region {
 public:
  enum class Shape { Rectangle, Disc };

  static Region rectangle(double x_lo, double x_hi, double y_lo, double y_hi);
  static Region disc(Point center, double radius);

  Shape shape() const { return shape_; }
  bool is_rectangle() const { return shape_ == Shape::Rectangle; }
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  double y_lo() const { return y_lo_; }
  double y_hi() const { return y_hi_; }
  Point center() const { return center_; }
  double radius() const { return radius_; }

  /// Membership in the closed region, enlarged by `slack`.
  bool contains(Point p, double slack = 0.0) const;
  /// Positive inside, negative outside.
  double distance_to_boundary(Point p) const;
  double area() const;
  double diameter() const;
  std::string describe() const;

 private:
  Shape shape_ = Shape::Rectangle;
  double x_lo_ = 0, x_hi_ = 0, y_lo_ = 0, y_hi_ = 0;
  Point center_{};
  double radius_ = 0;
};

enum class ChartKind { Elliptic, ArcNormal, PointNormal, CircleNormal, PolynomialIntegral };

const char* to_string(ChartKind kind);

/// Z(p + d) - Z(p) as a function of the displacement d, evaluated without cancellation.
using DeltaFunction = std::function<Complex(double dx, double dy)>;

/// Global first integral Z of L = Z_x d/dy - Z_y d/dx.
///
/// Every variant except CircleNormal has the form Z = lambda * (x + i Q(x, y)) with Q
/// an exact polynomial, which makes orders and characteristic tests exact. CircleNormal
/// lives on (theta, t) with theta wrapped to [0, 2 pi).
class FirstIntegral {
 public:
  static FirstIntegral elliptic(Region domain);
  /// Z = s + i t^k, k odd.
  static FirstIntegral arc_normal(int k, Region domain);
  /// Z = s + i int_0^t psi(s, tau) dtau.
  static FirstIntegral point_normal(const BivariatePolynomial& psi, Region domain);
  /// Z = exp(t^k + i theta) on [0, 2 pi) x (-delta, delta), k odd.
  static FirstIntegral circle_normal(int k, double delta);
  /// Z = x + i Q(x, y), Q = int_0^y P(x, tau) dtau.
  static FirstIntegral polynomial_integral(const BivariatePolynomial& p, Region domain);

  /// Same structure with Z replaced by lambda * Z.
  FirstIntegral scaled(Complex lambda) const;

  ChartKind kind() const { return kind_; }
  const Region& domain() const { return domain_; }
  int k() const { return k_; }
  Complex scale() const { return scale_; }

  /// Im part Q (before scaling) for the polynomial-form variants, nullptr otherwise.
  const BivariatePolynomial* imaginary_part() const;
  /// dQ/dy, the density whose zero set is the characteristic set.
  const BivariatePolynomial* density() const;

  bool in_domain(Point p) const;
  Complex eval(Point p) const;
  Complex eval_unchecked(Point p) const;
  /// (Z_x, Z_y), analytic.
  std::pair<Complex, Complex> grad(Point p) const;
  std::pair<Complex, Complex> grad_unchecked(Point p) const;
  /// Im(Z_x conj(Z_y)); zero exactly on the characteristic set.
  double characteristic_function(Point p) const;

  /// Stable difference Z(p + d) - Z(p) around a fixed base point.
  DeltaFunction delta_at(Point p) const;

  /// Distance from p to the characteristic set. Exact for normal forms; for polynomial
  /// structures a sampled estimate over a box of half-width `search`.
  double distance_to_sigma(Point p, double search = 0.25) const;

  std::string describe() const;

 private:
  struct PolyData;

  ChartKind kind_ = ChartKind::Elliptic;
  Region domain_;
  int k_ = 1;
  Complex scale_{1.0, 0.0};
  std::shared_ptr<const PolyData> poly_;
};

/// Report of the sampled domain invariants of a first integral.
struct IntegralInvariants {
  bool injective = true;
  bool nondegenerate = true;
  bool density_nonnegative = true;
  std::size_t samples = 0;
};

IntegralInvariants check_invariants(const FirstIntegral& z, std::size_t n_samples,
                                    std::uint64_t seed);

/// Function with optional analytic partials.
struct SmoothFunction {
  std::function<Complex(Point)> value;
  std::function<Complex(Point)> dx;
  std::function<Complex(Point)> dy;

  bool has_partials() const { return static_cast<bool>(dx) && static_cast<bool>(dy); }
};

/// L u = Z_x du/dy - Z_y du/dx from known partials.
Complex apply_L(const FirstIntegral& z, Point p, Complex du_dx, Complex du_dy);

/// L u with analytic partials when `fd_step` is empty, else central differences of the
/// given order (2 or 4). The stencil must stay inside the domain of Z.
Complex apply_L(const FirstIntegral& z, const SmoothFunction& u, Point p,
                std::optional<double> fd_step, int fd_order = 2);

/// Central-difference partials of u at p; stencil points must lie in `domain`.
std::pair<Complex, Complex> central_partials(const std::function<Complex(Point)>& u, Point p,
                                             double h, int order);

inline constexpr double kDefaultFdStep = 1e-4;

}  // namespace hypocauchy
