#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hypocauchy/structures.hpp"

namespace hypocauchy {

enum class BaseRule {
  // Tensor 3-point Gauss embedded in the 7-point Kronrod extension (degree 11 per axis).
  GaussKronrod3x7,
};

/// Axis-parallel line across which the integrand has an algebraic singularity |x - c|^-a.
struct SingularLine {
  bool vertical = true;  // x = position when vertical, y = position otherwise
  double position = 0.0;
};

struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  int max_depth = 22;
  std::vector<Point> singular_points;
  double exclusion_radius_floor = 1e-7;
  BaseRule base_rule = BaseRule::GaussKronrod3x7;
  /// Estimate the innermost cell around a singular point by extrapolating the
  /// self-similar sequence of annular contributions; otherwise use the base rule there.
  bool tail_extrapolation = true;
  std::size_t max_cells = 400000;
  std::vector<SingularLine> singular_lines;
  /// Power of the graded substitution used next to singular lines.
  int line_grading = 10;
  /// Extra initial subdivision lines (kinks of piecewise integrands); rectangles only.
  std::vector<double> breakpoints_x;
  std::vector<double> breakpoints_y;

  void validate() const;
};

struct IntegralResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  std::size_t cells_used = 0;
  bool converged = true;
  /// At least one singular point produced a non-decaying sequence of contributions.
  bool diverging = false;
};

using Integrand = std::function<Complex(Point)>;

/// Adaptive cubature over a rectangle (quad tree) or a disc (polar sector tree).
IntegralResult integrate(const Integrand& f, const Region& region, const QuadratureSpec& spec);

struct Spec1D {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_intervals = 20000;
  std::vector<double> breakpoints;
};

/// Adaptive Gauss-Kronrod 7/15 over [a, b].
IntegralResult integrate_1d(const std::function<Complex(double)>& f, double a, double b,
                            const Spec1D& spec = {});

/// I = int over the disc of radius rho of |s + i|t|^(1/tau)|^-q, through eta = sgn(t)|t|^(1/tau)
/// and polar coordinates in (s, eta).
IntegralResult integrate_quasihomogeneous(double tau, double q, double rho, const QuadratureSpec& spec);

/// Same substitution with a bounded weight g(s, t) multiplying the singular factor; q may be 0.
IntegralResult integrate_quasihomogeneous_weighted(double tau, double q, double rho,
                                                   const std::function<double(double, double)>& g,
                                                   const QuadratureSpec& spec);

}  // namespace hypocauchy
