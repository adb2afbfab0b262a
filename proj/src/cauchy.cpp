#include "hypocauchy/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hypocauchy/error.hpp"
#include "parallel.hpp"

namespace hypocauchy {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

bool near_sigma(const FirstIntegral& z, Point p) { return z.distance_to_sigma(p) <= 1e-12; }

// Integrates g(w) over omega - at, with the singularity at the origin so that offsets keep
// full relative precision however small the cells get. Declared features move along.
IntegralResult integrate_about(const std::function<Complex(Point)>& g, const Region& omega, Point at,
                               const QuadratureSpec& spec) {
  const Region shifted = omega.is_rectangle()
                             ? Region::rectangle(omega.x_lo() - at.x, omega.x_hi() - at.x, omega.y_lo() - at.y,
                                                 omega.y_hi() - at.y)
                             : Region::disc({omega.center().x - at.x, omega.center().y - at.y}, omega.radius());
  QuadratureSpec s = spec;
  for (auto& p : s.singular_points) p = {p.x - at.x, p.y - at.y};
  for (auto& l : s.singular_lines) l.position -= l.vertical ? at.x : at.y;
  for (auto& b : s.breakpoints_x) b -= at.x;
  for (auto& b : s.breakpoints_y) b -= at.y;
  if (omega.contains(at, 1e-14 * std::max(1.0, omega.diameter()))) s.singular_points.push_back({0.0, 0.0});
  return integrate(g, shifted, s);
}

NormResult to_norm(const IntegralResult& r, double q) {
  NormResult n;
  const double v = std::max(0.0, r.value.real());
  n.value = std::pow(v, 1.0 / q);
  n.error_estimate = v > 0 ? n.value * r.error_estimate / (q * v) : r.error_estimate;
  n.converged = r.converged;
  n.diverging = r.diverging;
  n.cells_used = r.cells_used;
  return n;
}

void require_grid(const Grid& g) {
  if (g.xs.empty() || g.ys.empty()) throw Error(ErrorCode::InvalidArgument, "empty grid");
}

}  // namespace

Grid Grid::cell_centred(const Region& box, std::size_t nx, std::size_t ny) {
  if (nx == 0 || ny == 0) throw Error(ErrorCode::InvalidArgument, "grid needs at least one node per axis");
  Grid g;
  const double hx = (box.x_hi() - box.x_lo()) / static_cast<double>(nx);
  const double hy = (box.y_hi() - box.y_lo()) / static_cast<double>(ny);
  for (std::size_t i = 0; i < nx; ++i) g.xs.push_back(box.x_lo() + (static_cast<double>(i) + 0.5) * hx);
  for (std::size_t j = 0; j < ny; ++j) g.ys.push_back(box.y_lo() + (static_cast<double>(j) + 0.5) * hy);
  // Snap the middle node of odd grids onto the exact centre.
  if (nx % 2 == 1) g.xs[nx / 2] = 0.5 * (box.x_lo() + box.x_hi());
  if (ny % 2 == 1) g.ys[ny / 2] = 0.5 * (box.y_lo() + box.y_hi());
  return g;
}

Grid Grid::lattice(const Region& box, std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2) throw Error(ErrorCode::InvalidArgument, "lattice needs two nodes per axis");
  Grid g;
  for (std::size_t i = 0; i < nx; ++i)
    g.xs.push_back(box.x_lo() + (box.x_hi() - box.x_lo()) * static_cast<double>(i) / static_cast<double>(nx - 1));
  for (std::size_t j = 0; j < ny; ++j)
    g.ys.push_back(box.y_lo() + (box.y_hi() - box.y_lo()) * static_cast<double>(j) / static_cast<double>(ny - 1));
  return g;
}

Complex eval_kernel(const FirstIntegral& z, Point at, Point var) {
  const Complex d = z.delta_at(at)(var.x - at.x, var.y - at.y);
  if (d == Complex(0.0, 0.0)) throw Error(ErrorCode::Singular, "kernel evaluated at coincident points");
  return 1.0 / d;
}

NormResult kernel_Lq_norm(const FirstIntegral& z, const Region& omega, double q, Point at,
                          const QuadratureSpec& spec) {
  if (!(q > 0)) throw Error(ErrorCode::InvalidArgument, "q must be positive");
  if (!z.in_domain(at)) throw Error(ErrorCode::OutOfDomain, "kernel_Lq_norm: point outside the domain");
  const auto delta = z.delta_at(at);
  auto integrand = [&](Point w) {
    const double a = std::abs(delta(w.x, w.y));
    return Complex(a > 0 ? std::pow(a, -q) : 0.0);
  };
  return to_norm(integrate_about(integrand, omega, at, spec), q);
}

KernelNormReport kernel_sup_experiment(const FirstIntegral& z, const Region& omega, double q,
                                       const std::vector<Point>& points, const QuadratureSpec& spec,
                                       double floor_factor, Execution exec) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "no evaluation points");
  if (!(floor_factor > 1)) throw Error(ErrorCode::InvalidArgument, "floor_factor must exceed 1");
  QuadratureSpec fine = spec;
  fine.exclusion_radius_floor /= floor_factor;
  fine.rel_tol /= 10.0;
  fine.validate();

  KernelNormReport rep;
  rep.q = q;
  rep.eval_points = points;
  rep.coarse.resize(points.size());
  rep.fine.resize(points.size());
  detail::for_each_index(2 * points.size(), exec, [&](std::size_t k) {
    const std::size_t i = k / 2;
    if (k % 2 == 0)
      rep.coarse[i] = kernel_Lq_norm(z, omega, q, points[i], spec);
    else
      rep.fine[i] = kernel_Lq_norm(z, omega, q, points[i], fine);
  });

  double sup_c = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    rep.norms.push_back(rep.fine[i].value);
    rep.sup_norm = std::max(rep.sup_norm, rep.fine[i].value);
    sup_c = std::max(sup_c, rep.coarse[i].value);
    rep.all_converged = rep.all_converged && rep.coarse[i].converged && rep.fine[i].converged;
    if (near_sigma(z, points[i]) && rep.coarse[i].value > 0)
      rep.sigma_point_ratio = std::max(rep.sigma_point_ratio, rep.fine[i].value / rep.coarse[i].value);
  }
  rep.refinement_ratio = sup_c > 0 ? rep.sup_norm / sup_c : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

bool OperatorField::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
}

double OperatorField::sup_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

IntegralResult apply_TZ_at(const FirstIntegral& z, const Region& omega, const Field& f, Point at,
                           const QuadratureSpec& spec, Complex normalization) {
  if (!z.in_domain(at)) throw Error(ErrorCode::OutOfDomain, "apply_TZ: node outside the domain");
  const auto delta = z.delta_at(at);
  auto integrand = [&](Point w) {
    const Complex d = delta(w.x, w.y);
    if (d == Complex(0.0, 0.0)) return Complex(0.0);
    return f({at.x + w.x, at.y + w.y}) / d;
  };
  IntegralResult r = integrate_about(integrand, omega, at, spec);
  const Complex factor = normalization * (-1.0 / kPi);
  r.value *= factor;
  r.error_estimate *= std::abs(factor);
  return r;
}

NormResult lp_norm(const Field& f, const Region& omega, double p, const QuadratureSpec& spec) {
  if (!(p > 0)) throw Error(ErrorCode::InvalidArgument, "p must be positive");
  return to_norm(integrate([&](Point v) { return Complex(std::pow(std::abs(f(v)), p)); }, omega, spec), p);
}

OperatorField apply_TZ(const FirstIntegral& z, const Region& omega, const Field& f, const Grid& grid,
                       const QuadratureSpec& spec, Complex normalization, double p, Execution exec) {
  require_grid(grid);
  spec.validate();
  OperatorField out;
  out.grid = grid;
  out.p = p;
  out.normalization = normalization;
  out.spec = spec;
  const NormResult fn = lp_norm(f, omega, p, spec);
  out.f_norm_p = fn.value;
  out.values.resize(grid.size());
  std::vector<char> ok(grid.size(), 1);
  detail::for_each_index(grid.size(), exec, [&](std::size_t i) {
    const auto r = apply_TZ_at(z, omega, f, grid.node(i), spec, normalization);
    out.values[i] = r.value;
    ok[i] = r.converged ? 1 : 0;
  });
  out.converged.assign(ok.begin(), ok.end());
  return out;
}

Complex calibrate_normalization(const FirstIntegral& z, const Region& omega, const QuadratureSpec& spec,
                                const Field& f) {
  if (z.kind() != ChartKind::Elliptic) {
    throw Error(ErrorCode::InvalidArgument, "calibration requires the elliptic structure");
  }
  const Point c = omega.center();
  double hx, hy;
  if (omega.is_rectangle()) {
    hx = 0.5 * (omega.x_hi() - omega.x_lo());
    hy = 0.5 * (omega.y_hi() - omega.y_lo());
  } else {
    hx = hy = omega.radius() / std::numbers::sqrt2;
  }
  std::vector<Point> pts{c};
  for (int k = 0; k < 8; ++k) {
    const double a = k * kPi / 4;
    pts.push_back({c.x + 0.5 * hx * std::cos(a), c.y + 0.5 * hy * std::sin(a)});
  }
  const double h = 1e-3 * std::min(hx, hy);
  auto u = [&](Point p) { return apply_TZ_at(z, omega, f, p, spec, 1.0).value; };
  std::vector<Complex> lu(pts.size()), fv(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [dx, dy] = central_partials(u, pts[i], h, 4);
    lu[i] = apply_L(z, pts[i], dx, dy);
    fv[i] = f(pts[i]);
  }
  Complex num = 0;
  double den = 0;
  double fmax = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    num += std::conj(lu[i]) * fv[i];
    den += std::norm(lu[i]);
    fmax = std::max(fmax, std::abs(fv[i]));
  }
  if (!(den > 0) || !(fmax > 0)) throw Error(ErrorCode::CalibrationFailed, "operator vanished on the probe points");
  const Complex k = num / den;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::abs(k * lu[i] - fv[i]) > 1e-2 * fmax) {
      throw Error(ErrorCode::CalibrationFailed, "residual above 1% at a probe point");
    }
  }
  return k;
}

ResidualReport verify_solution(const FirstIntegral& z, const Region& omega, const Field& f,
                               const OperatorField& field, double fd_step, double band, Execution exec) {
  require_grid(field.grid);
  if (!(fd_step > 0)) throw Error(ErrorCode::InvalidArgument, "fd_step must be positive");
  ResidualReport rep;
  const std::size_t n = field.grid.size();
  std::vector<double> absres(n, std::numeric_limits<double>::quiet_NaN()), fabs(n, 0.0);
  std::vector<char> use(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Point g = field.grid.node(i);
    use[i] = omega.distance_to_boundary(g) > 2 * fd_step && z.distance_to_sigma(g) > band;
  }
  detail::for_each_index(n, exec, [&](std::size_t i) {
    if (!use[i]) return;
    const Point g = field.grid.node(i);
    auto u = [&](Point p) { return apply_TZ_at(z, omega, f, p, field.spec, field.normalization).value; };
    const auto [dx, dy] = central_partials(u, g, fd_step, 2);
    const Complex fg = f(g);
    absres[i] = std::abs(apply_L(z, g, dx, dy) - fg);
    fabs[i] = std::abs(fg);
  });
  const double fmax = *std::max_element(fabs.begin(), fabs.end());
  std::vector<double> checked;
  rep.relative.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    if (!use[i]) continue;
    const double den = std::max(fabs[i], 1e-3 * fmax);
    rep.relative[i] = den > 0 ? absres[i] / den : absres[i];
    checked.push_back(rep.relative[i]);
  }
  rep.nodes_checked = checked.size();
  if (!checked.empty()) {
    rep.max_relative = *std::max_element(checked.begin(), checked.end());
    std::sort(checked.begin(), checked.end());
    const std::size_t m = checked.size();
    rep.median_relative = m % 2 ? checked[m / 2] : 0.5 * (checked[m / 2 - 1] + checked[m / 2]);
  }
  return rep;
}

CauchyCheck cauchy_formula_check(const FirstIntegral& z, const Region& omega, const SmoothFunction& w,
                                 const std::vector<Point>& test_points, const QuadratureSpec& spec,
                                 Complex normalization) {
  if (!w.has_partials()) throw Error(ErrorCode::InvalidArgument, "cauchy_formula_check needs analytic partials");
  Spec1D s1;
  s1.rel_tol = std::min(1e-10, spec.rel_tol);
  s1.abs_tol = spec.abs_tol;

  struct Edge {
    Point a, b;
  };
  std::vector<Edge> edges;
  if (omega.is_rectangle()) {
    const Point p00{omega.x_lo(), omega.y_lo()}, p10{omega.x_hi(), omega.y_lo()};
    const Point p11{omega.x_hi(), omega.y_hi()}, p01{omega.x_lo(), omega.y_hi()};
    edges = {{p00, p10}, {p10, p11}, {p11, p01}, {p01, p00}};
  }

  CauchyCheck out;
  for (const Point p : test_points) {
    if (omega.distance_to_boundary(p) < 10 * spec.exclusion_radius_floor) {
      ++out.skipped;
      continue;
    }
    const auto delta = z.delta_at(p);
    auto kernel = [&](Point v) { return 1.0 / delta(v.x - p.x, v.y - p.y); };
    Complex boundary = 0;
    if (omega.is_rectangle()) {
      for (const auto& e : edges) {
        const Point d{e.b.x - e.a.x, e.b.y - e.a.y};
        // Breakpoint at the foot of the perpendicular from p.
        const double foot = ((p.x - e.a.x) * d.x + (p.y - e.a.y) * d.y) / (d.x * d.x + d.y * d.y);
        Spec1D se = s1;
        if (foot > 0 && foot < 1) se.breakpoints = {foot};
        auto g = [&](double tau) {
          const Point v{e.a.x + tau * d.x, e.a.y + tau * d.y};
          const auto [zx, zy] = z.grad_unchecked(v);
          return w.value(v) * kernel(v) * (zx * d.x + zy * d.y);
        };
        boundary += integrate_1d(g, 0.0, 1.0, se).value;
      }
    } else {
      const Point c = omega.center();
      const double r = omega.radius();
      Spec1D se = s1;
      double th = std::atan2(p.y - c.y, p.x - c.x);
      if (th < 0) th += 2 * kPi;
      se.breakpoints = {th};
      auto g = [&](double t) {
        const Point v{c.x + r * std::cos(t), c.y + r * std::sin(t)};
        const auto [zx, zy] = z.grad_unchecked(v);
        return w.value(v) * kernel(v) * (zx * (-r * std::sin(t)) + zy * (r * std::cos(t)));
      };
      boundary = integrate_1d(g, 0.0, 2 * kPi, se).value;
    }
    auto area_integrand = [&](Point o) {
      const Complex d = delta(o.x, o.y);
      if (d == Complex(0.0, 0.0)) return Complex(0.0);
      const Point v{p.x + o.x, p.y + o.y};
      return apply_L(z, v, w.dx(v), w.dy(v)) / d;
    };
    const Complex area = -2.0 * kI * normalization * integrate_about(area_integrand, omega, p, spec).value;
    const Complex lhs = 2.0 * kPi * kI * w.value(p);
    const double err = std::abs(lhs - (boundary + area));
    out.points.push_back(p);
    out.rel_errors.push_back(std::abs(lhs) > 0 ? err / std::abs(lhs) : err);
    out.max_rel_error = std::max(out.max_rel_error, out.rel_errors.back());
  }
  return out;
}

L1Report TZ_of_L1_function(const FirstIntegral& z, const Region& omega, const Field& f, double q,
                           const QuadratureSpec& spec, Complex normalization, std::size_t n, Execution exec) {
  if (!(q >= 1)) throw Error(ErrorCode::InvalidArgument, "q must be at least 1");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "grid size must be positive");
  const Region box = omega.is_rectangle()
                         ? omega
                         : Region::rectangle(omega.center().x - omega.radius(), omega.center().x + omega.radius(),
                                             omega.center().y - omega.radius(), omega.center().y + omega.radius());
  L1Report rep;
  auto riemann = [&](std::size_t m) {
    const Grid g = Grid::cell_centred(box, m, m);
    const double cell = (box.x_hi() - box.x_lo()) * (box.y_hi() - box.y_lo()) / static_cast<double>(m * m);
    std::vector<double> terms(g.size(), 0.0);
    std::vector<char> ok(g.size(), 1);
    detail::for_each_index(g.size(), exec, [&](std::size_t i) {
      const Point p = g.node(i);
      if (!omega.contains(p)) return;
      const auto r = apply_TZ_at(z, omega, f, p, spec, normalization);
      terms[i] = std::pow(std::abs(r.value), q) * cell;
      ok[i] = r.converged ? 1 : 0;
    });
    double sum = 0.0;
    for (double t : terms) sum += t;
    rep.all_converged = rep.all_converged && std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
    return std::pow(sum, 1.0 / q);
  };
  rep.norm_coarse = riemann(n);
  rep.norm_fine = riemann(2 * n);
  rep.relative_change = std::abs(rep.norm_fine - rep.norm_coarse) / std::max(rep.norm_fine, 1e-300);
  rep.stable = std::isfinite(rep.norm_fine) && rep.relative_change < 0.05;
  return rep;
}

}  // namespace hypocauchy
