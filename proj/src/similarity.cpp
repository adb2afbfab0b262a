#include "hypocauchy/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypocauchy/error.hpp"
#include "parallel.hpp"

namespace hypocauchy {

namespace {

void require_tensor_grid(const Grid& g, const Region& omega) {
  if (!omega.is_rectangle()) throw Error(ErrorCode::InvalidArgument, "similarity runs need a rectangle");
  if (g.xs.size() < 3 || g.ys.size() < 3) throw Error(ErrorCode::InvalidArgument, "grid needs three nodes per axis");
  if (!std::is_sorted(g.xs.begin(), g.xs.end()) || !std::is_sorted(g.ys.begin(), g.ys.end()))
    throw Error(ErrorCode::InvalidArgument, "grid coordinates must increase");
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!omega.contains(g.node(i))) throw Error(ErrorCode::InvalidArgument, "grid node outside omega");
}

// Spec with the grid lines as breakpoints: the interpolated forcing has kinks there.
QuadratureSpec with_grid_lines(const QuadratureSpec& spec, const Grid& g) {
  QuadratureSpec s = spec;
  s.breakpoints_x.insert(s.breakpoints_x.end(), g.xs.begin(), g.xs.end());
  s.breakpoints_y.insert(s.breakpoints_y.end(), g.ys.begin(), g.ys.end());
  return s;
}

struct Forcing {
  Field A, B;
  GridInterpolant chi;
  Complex operator()(Point p) const { return A(p) + B(p) * chi(p); }
};

std::vector<Complex> nodal_chi(const std::vector<Complex>& u, double rel) {
  double umax = 0;
  for (const auto& v : u) umax = std::max(umax, std::abs(v));
  std::vector<Complex> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = chi(u[i], rel * umax);
  return out;
}

bool off_band(const FirstIntegral& z, const Region& omega, Point p, double band, double margin) {
  return omega.distance_to_boundary(p) > margin && z.distance_to_sigma(p) > band;
}

}  // namespace

Complex chi(Complex u, double zero_threshold) {
  if (!(std::abs(u) > zero_threshold)) return 0.0;
  const Complex r = std::conj(u) / u;
  // |conj(u)/u| = 1 up to rounding; renormalise so the bound holds exactly.
  const double m = std::abs(r);
  return m > 1.0 ? r / m : r;
}

Complex HolomorphicPolynomial::operator()(Complex w) const {
  Complex acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * w + *it;
  return acc;
}

GridInterpolant::GridInterpolant(const Grid& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size() || grid_.size() == 0)
    throw Error(ErrorCode::InvalidArgument, "interpolant needs one value per node");
}

Complex GridInterpolant::operator()(Point p) const {
  auto locate = [](const std::vector<double>& a, double x, std::size_t& i, double& w) {
    if (a.size() == 1 || x <= a.front()) {
      i = 0;
      w = 0;
      return;
    }
    if (x >= a.back()) {
      i = a.size() - 2;
      w = 1;
      return;
    }
    i = static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), x) - a.begin()) - 1;
    w = (x - a[i]) / (a[i + 1] - a[i]);
  };
  std::size_t i, j;
  double wx, wy;
  locate(grid_.xs, p.x, i, wx);
  locate(grid_.ys, p.y, j, wy);
  const std::size_t ny = grid_.ys.size();
  const std::size_t i1 = std::min(i + 1, grid_.xs.size() - 1), j1 = std::min(j + 1, ny - 1);
  auto at = [&](std::size_t a, std::size_t b) { return values_[a * ny + b]; };
  return (1 - wx) * ((1 - wy) * at(i, j) + wy * at(i, j1)) + wx * ((1 - wy) * at(i1, j) + wy * at(i1, j1));
}

SimilaritySolution fixed_point_solve(const FirstIntegral& z, const Region& omega, const HolomorphicPolynomial& H,
                                     const Field& A, const Field& B, const Grid& grid,
                                     const QuadratureSpec& spec, Complex normalization,
                                     const SimilarityOptions& opts) {
  require_tensor_grid(grid, omega);
  if (opts.max_iter == 0) throw Error(ErrorCode::InvalidArgument, "max_iter must be positive");
  if (H.coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "H has no coefficients");
  const QuadratureSpec qs = with_grid_lines(spec, grid);
  const std::size_t n = grid.size();

  std::vector<Complex> hz(n);
  for (std::size_t i = 0; i < n; ++i) hz[i] = H(z.eval(grid.node(i)));

  SimilaritySolution sol;
  sol.H = H;
  std::vector<Complex> s(n, 0.0), u(n);
  auto make_u = [&](const std::vector<Complex>& sv) {
    for (std::size_t i = 0; i < n; ++i) u[i] = hz[i] * std::exp(sv[i]);
  };
  make_u(s);
  Forcing forcing{A, B, GridInterpolant(grid, nodal_chi(u, opts.zero_threshold_rel))};
  OperatorField s_field;
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    forcing.chi = GridInterpolant(grid, nodal_chi(u, opts.zero_threshold_rel));
    s_field = apply_TZ(z, omega, forcing, grid, qs, normalization, opts.p, opts.exec);
    double change = 0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(s_field.values[i] - s[i]));
    s = s_field.values;
    make_u(s);
    sol.changes.push_back(change);
    sol.iterations = it + 1;
    if (change < opts.tol) {
      sol.converged = true;
      break;
    }
  }
  for (std::size_t i = 1; i < sol.changes.size(); ++i)
    if (sol.changes[i - 1] > 0) sol.max_contraction = std::max(sol.max_contraction, sol.changes[i] / sol.changes[i - 1]);
  sol.converged = sol.converged && s_field.all_converged();
  sol.forcing_norm_p = s_field.f_norm_p;
  sol.s = s_field;
  sol.u = s_field;
  sol.u.values = u;
  sol.s_sup = s_field.sup_abs();
  const auto chis = nodal_chi(u, opts.zero_threshold_rel);
  sol.u_min_abs = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    sol.chi_max_abs = std::max(sol.chi_max_abs, std::abs(chis[i]));
    sol.u_min_abs = std::min(sol.u_min_abs, std::abs(u[i]));
  }

  // L u - A u - B conj(u) at interior off-band nodes, with s re-evaluated on the stencil.
  std::vector<double> res(n, -1.0), scale(n, 0.0);
  detail::for_each_index(n, opts.exec, [&](std::size_t i) {
    const Point g = grid.node(i);
    if (!off_band(z, omega, g, opts.band, 2 * opts.fd_step)) return;
    auto uf = [&](Point p) {
      return H(z.eval(p)) * std::exp(apply_TZ_at(z, omega, forcing, p, qs, normalization).value);
    };
    const auto [dx, dy] = central_partials(uf, g, opts.fd_step, 2);
    const Complex au = A(g) * u[i], bu = B(g) * std::conj(u[i]);
    res[i] = std::abs(apply_L(z, g, dx, dy) - au - bu);
    scale[i] = std::abs(au) + std::abs(bu);
  });
  double smax = 0;
  sol.residuals.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    if (res[i] < 0) continue;
    sol.residuals[i] = res[i];
    ++sol.residual_nodes;
    sol.residual_abs = std::max(sol.residual_abs, res[i]);
    smax = std::max(smax, scale[i]);
  }
  sol.residual_max = smax > 0 ? sol.residual_abs / smax : sol.residual_abs;
  return sol;
}

Factorization factor_solution(const FirstIntegral& z, const Region& omega, const OperatorField& u,
                              const Field& A, const Field& B, const QuadratureSpec& spec,
                              Complex normalization, const SimilarityOptions& opts,
                              const HolomorphicPolynomial* reference) {
  const Grid& grid = u.grid;
  require_tensor_grid(grid, omega);
  if (u.values.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "field does not match its grid");
  const Forcing forcing{A, B, GridInterpolant(grid, nodal_chi(u.values, opts.zero_threshold_rel))};
  Factorization out;
  out.s = apply_TZ(z, omega, forcing, grid, with_grid_lines(spec, grid), normalization, opts.p, opts.exec);
  out.v = out.s;
  for (std::size_t i = 0; i < grid.size(); ++i) out.v.values[i] = u.values[i] * std::exp(-out.s.values[i]);

  const std::size_t nx = grid.xs.size(), ny = grid.ys.size();
  double dev = 0, href = 0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const Point g{grid.xs[i], grid.ys[j]};
      if (z.distance_to_sigma(g) <= opts.band) continue;
      if (reference) {
        const Complex h = (*reference)(z.eval(g));
        dev = std::max(dev, std::abs(out.v.values[i * ny + j] - h));
        href = std::max(href, std::abs(h));
      }
      if (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny) continue;
      auto v = [&](std::size_t a, std::size_t b) { return out.v.values[a * ny + b]; };
      const Complex vx = (v(i + 1, j) - v(i - 1, j)) / (grid.xs[i + 1] - grid.xs[i - 1]);
      const Complex vy = (v(i, j + 1) - v(i, j - 1)) / (grid.ys[j + 1] - grid.ys[j - 1]);
      const double lv = std::abs(apply_L(z, g, vx, vy));
      out.holo_residual = std::max(out.holo_residual, lv);
      const double det = 2.0 * std::abs(z.characteristic_function(g));
      if (det > 0) out.cr_residual = std::max(out.cr_residual, lv / det);
    }
  }
  out.h_deviation = reference ? (href > 0 ? dev / href : dev) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace hypocauchy
