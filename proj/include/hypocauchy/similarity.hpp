#pragma once

#include <cstddef>
#include <vector>

#include "hypocauchy/cauchy.hpp"

namespace hypocauchy {

/// conj(u) / u, or 0 when |u| <= zero_threshold.
Complex chi(Complex u, double zero_threshold);

/// H(w) = sum c_k w^k.
struct HolomorphicPolynomial {
  std::vector<Complex> coeffs;

  Complex operator()(Complex w) const;
};

/// Bilinear interpolation of nodal values on a tensor grid, constant beyond the outer nodes.
class GridInterpolant {
 public:
  GridInterpolant(const Grid& grid, std::vector<Complex> values);
  Complex operator()(Point p) const;

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

struct SimilarityOptions {
  std::size_t max_iter = 30;
  double tol = 1e-6;           // stop when max nodal change of s drops below
  double band = 0.1;           // residuals only farther than this from the characteristic set
  double fd_step = 1e-3;
  double zero_threshold_rel = 1e-10;  // chi threshold relative to max |u| on the grid
  double p = 4.5;              // exponent of the reported forcing norm
  Execution exec = Execution::Parallel;
};

struct SimilaritySolution {
  OperatorField u;
  OperatorField s;
  HolomorphicPolynomial H;
  double residual_max = 0.0;      // max |Lu - Au - B conj u| / max(|Au| + |B conj u|) off-band
  double residual_abs = 0.0;
  std::size_t residual_nodes = 0;
  std::vector<double> residuals;  // per node |Lu - Au - B conj u|, NaN inside the band
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> changes;    // max nodal |s_{n+1} - s_n|
  double max_contraction = 0.0;   // largest ratio of successive changes
  double s_sup = 0.0;
  double forcing_norm_p = 0.0;    // ||A + B chi||_p of the last iterate
  double chi_max_abs = 0.0;
  double u_min_abs = 0.0;
};

/// s_0 = 0, u_n = H(Z) e^{s_n}, s_{n+1} = T_Z(A + B chi(u_n)), chi interpolated bilinearly
/// between nodes. `grid` must be a tensor grid inside the rectangle omega.
SimilaritySolution fixed_point_solve(const FirstIntegral& z, const Region& omega, const HolomorphicPolynomial& H,
                                     const Field& A, const Field& B, const Grid& grid,
                                     const QuadratureSpec& spec, Complex normalization,
                                     const SimilarityOptions& opts = {});

struct Factorization {
  OperatorField v;
  OperatorField s;
  double holo_residual = 0.0;  // max off-band |Lv| from grid differences
  double cr_residual = 0.0;    // max off-band |dv/d conj(w)| in the w = Z plane
  /// max off-band |v - H(Z)| / max |H(Z)| when a reference H is given, else NaN.
  double h_deviation = 0.0;
};

/// s = T_Z(A + B chi(u)), v = u e^{-s}.
Factorization factor_solution(const FirstIntegral& z, const Region& omega, const OperatorField& u,
                              const Field& A, const Field& B, const QuadratureSpec& spec,
                              Complex normalization, const SimilarityOptions& opts = {},
                              const HolomorphicPolynomial* reference = nullptr);

}  // namespace hypocauchy
