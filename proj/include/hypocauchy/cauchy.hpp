#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hypocauchy/quad.hpp"
#include "hypocauchy/structures.hpp"

namespace hypocauchy {

enum class Execution { Serial, Parallel };

/// Tensor lattice of evaluation nodes, x-major (index = i * ys.size() + j).
struct Grid {
  std::vector<double> xs;
  std::vector<double> ys;

  /// n x n nodes at the centres of a uniform n x n partition of the box.
  static Grid cell_centred(const Region& box, std::size_t nx, std::size_t ny);
  /// n x n nodes including the box edges.
  static Grid lattice(const Region& box, std::size_t nx, std::size_t ny);

  std::size_t size() const { return xs.size() * ys.size(); }
  Point node(std::size_t index) const { return {xs[index / ys.size()], ys[index % ys.size()]}; }
};

using Field = std::function<Complex(Point)>;

/// 1 / (Z(var) - Z(at)); throws Singular when the images coincide.
Complex eval_kernel(const FirstIntegral& z, Point at, Point var);

struct NormResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  bool diverging = false;
  std::size_t cells_used = 0;
};

/// (int over omega of |K_at|^q)^(1/q); non-convergence is flagged, not thrown.
NormResult kernel_Lq_norm(const FirstIntegral& z, const Region& omega, double q, Point at,
                          const QuadratureSpec& spec);

struct KernelNormReport {
  double q = 0.0;
  std::vector<Point> eval_points;
  std::vector<NormResult> coarse;
  std::vector<NormResult> fine;
  std::vector<double> norms;  // fine-spec values
  double sup_norm = 0.0;
  double refinement_ratio = 0.0;
  /// max over characteristic evaluation points of fine / coarse (0 when there are none).
  double sigma_point_ratio = 0.0;
  bool all_converged = true;
};

/// Per-point norms at `spec` and at the refined spec (floor / floor_factor, rel_tol / 10).
KernelNormReport kernel_sup_experiment(const FirstIntegral& z, const Region& omega, double q,
                                       const std::vector<Point>& points, const QuadratureSpec& spec,
                                       double floor_factor = 100.0,
                                       Execution exec = Execution::Parallel);

struct OperatorField {
  Grid grid;
  std::vector<Complex> values;
  std::vector<bool> converged;
  double p = 2.0;
  double f_norm_p = 0.0;
  Complex normalization{1.0, 0.0};
  QuadratureSpec spec;

  bool all_converged() const;
  double sup_abs() const;
};

/// normalization * (-1/pi) int_omega f K_at at a single point.
IntegralResult apply_TZ_at(const FirstIntegral& z, const Region& omega, const Field& f, Point at,
                           const QuadratureSpec& spec, Complex normalization);

OperatorField apply_TZ(const FirstIntegral& z, const Region& omega, const Field& f, const Grid& grid,
                       const QuadratureSpec& spec, Complex normalization, double p = 2.0,
                       Execution exec = Execution::Parallel);

/// L^p norm of f with the singularities declared in `spec`.
NormResult lp_norm(const Field& f, const Region& omega, double p, const QuadratureSpec& spec);

/// Least-squares constant c with L(c T 1) = 1 at the centre and eight points at half radius,
/// from fourth-order differences; CalibrationFailed if any residual exceeds 1%.
Complex calibrate_normalization(const FirstIntegral& z, const Region& omega, const QuadratureSpec& spec,
                                const Field& f = [](Point) { return Complex(1.0); });

struct ResidualReport {
  std::vector<double> relative;  // NaN at excluded nodes
  double max_relative = 0.0;
  double median_relative = 0.0;
  std::size_t nodes_checked = 0;
};

/// |L u - f| / max(|f|, 1e-3 max|f|) at interior nodes farther than `band` from the
/// characteristic set; u is re-evaluated on the difference stencil with the field's spec.
ResidualReport verify_solution(const FirstIntegral& z, const Region& omega, const Field& f,
                               const OperatorField& field, double fd_step, double band,
                               Execution exec = Execution::Parallel);

struct CauchyCheck {
  std::vector<Point> points;       // points actually evaluated
  std::vector<double> rel_errors;  // |LHS - RHS| / |LHS|
  std::size_t skipped = 0;
  double max_rel_error = 0.0;
};

/// 2 pi i w = boundary integral of w K dZ + (-2i) c int Lw K over omega, with c the
/// calibrated normalization; w needs analytic partials.
CauchyCheck cauchy_formula_check(const FirstIntegral& z, const Region& omega, const SmoothFunction& w,
                                 const std::vector<Point>& test_points, const QuadratureSpec& spec,
                                 Complex normalization);

struct L1Report {
  double norm_coarse = 0.0;
  double norm_fine = 0.0;
  double relative_change = 0.0;
  bool stable = false;
  bool all_converged = true;
};

/// ||T f||_q from midpoint sums on n x n and 2n x 2n cell-centred grids; stable when the
/// two differ by less than 5%.
L1Report TZ_of_L1_function(const FirstIntegral& z, const Region& omega, const Field& f, double q,
                           const QuadratureSpec& spec, Complex normalization, std::size_t n = 10,
                           Execution exec = Execution::Parallel);

}  // namespace hypocauchy
