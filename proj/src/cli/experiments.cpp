#include "experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hypocauchy/error.hpp"
#include "hypocauchy/loj.hpp"

namespace hypocauchy::cli {

namespace {

const std::set<std::string> kExperimentKeys{"kind", "seed", "description"};
const std::set<std::string> kChartKeys{"variant", "k", "domain", "delta", "scale", "psi", "factor#", "power#"};
const std::set<std::string> kRegionKeys{"shape", "bounds", "center", "radius"};
const std::set<std::string> kQuadKeys{"rel_tol",    "abs_tol",         "max_depth",     "exclusion_radius_floor",
                                      "tail_extrapolation", "max_cells", "line_grading", "singular_points",
                                      "singular_lines"};

Schema with_common(Schema extra) {
  extra["experiment"] = kExperimentKeys;
  return extra;
}

Region omega_of(const Config& c, const FirstIntegral& z) {
  return c.has_section("region") ? make_region(c) : z.domain();
}

Complex normalization_of(const Config& c, const std::string& section) {
  const std::string v = c.text(section, "normalization", "calibrate");
  if (v == "calibrate") return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  const auto n = parse_numbers("[" + section + "] normalization", v);
  if (n.size() != 2 || (n[0] == 0 && n[1] == 0))
    config_error("[" + section + "] normalization", "expected 'calibrate' or a nonzero 're im'");
  return {n[0], n[1]};
}

Complex resolve(Complex n) { return std::isnan(n.real()) ? calibrated_normalization() : n; }

double positive(const Config& c, const std::string& s, const std::string& k, double fallback) {
  const double v = c.number(s, k, fallback);
  if (!(v > 0)) config_error("[" + s + "] " + k, "must be positive");
  return v;
}

std::string point_str(const StratumPoint& p) {
  if (p.exact) return "(" + p.exact_point.x.get_str() + "," + p.exact_point.y.get_str() + ")";
  return fmt::format("({},{})", p.point.x, p.point.y);
}

bool on_sigma(const FirstIntegral& z, Point p) { return z.characteristic_function(p) == 0.0; }

// ---------------------------------------------------------------------------------------

Computation prepare_charset(const Config& c, std::uint64_t) {
  if (c.text("chart", "variant") != "polynomial")
    config_error("[chart] variant", "charset needs variant = polynomial with factors");
  const FirstIntegral z = make_chart(c);
  const FactoredPolynomial fp = chart_factors(c);
  const Region region = omega_of(c, z);
  std::map<std::size_t, int> stated;
  if (c.has("charset", "stated_orders"))
    for (const auto& g : c.groups("charset", "stated_orders")) {
      if (g.size() != 2 || g[0] < 1 || g[0] > double(fp.factors.size()) || g[0] != std::floor(g[0]) ||
          g[1] < 1 || g[1] != std::floor(g[1]))
        config_error("[charset] stated_orders", "expected 'factor order, ...' with 1-based factor indices");
      stated[static_cast<std::size_t>(g[0]) - 1] = static_cast<int>(g[1]);
    }
  return [=](RunResult& r) {
    const auto d = decompose_example(fp, region, stated);
    auto& t = r.table("charset.csv", {"stratum", "description", "x", "y", "order", "order_exact", "stated_order",
                                      "discrepancy"});
    std::string text = "Characteristic set of P = " + d.p.to_string() + "\n";
    auto points = [&](const char* label, const char* title, const std::vector<StratumPoint>& ps) {
      text += std::string(title) + ":\n";
      if (ps.empty()) text += "  (none)\n";
      for (const auto& p : ps) {
        t.row({label, point_str(p), num(p.point.x), num(p.point.y), num(p.order), boolean(p.exact), "", "false"});
        text += fmt::format("  {}: order {}\n", point_str(p), p.order);
      }
    };
    points("isolated", "isolated points", d.isolated_points);
    points("singular", "singular points", d.singular_points);
    text += "regular arcs:\n";
    bool flagged = false;
    for (const auto& rc : d.regular_components) {
      t.row({"regular", rc.description, num(rc.sample.x), num(rc.sample.y), num(rc.order), boolean(rc.order_exact),
             rc.stated_order ? num(*rc.stated_order) : "", boolean(rc.discrepancy)});
      text += fmt::format("  {}: order {}", rc.description, rc.order);
      if (rc.stated_order) text += fmt::format(" (stated {})", *rc.stated_order);
      if (rc.discrepancy) text += "  <-- discrepancy";
      text += "\n";
      flagged = flagged || rc.discrepancy;
    }
    r.texts.emplace_back("charset_summary.txt", text);
    r.summary["isolated_points"] = d.isolated_points.size();
    r.summary["singular_points"] = d.singular_points.size();
    r.summary["regular_components"] = d.regular_components.size();
    r.summary["discrepancies"] = flagged;
  };
}

Computation prepare_loj(const Config& c, std::uint64_t seed) {
  const FirstIntegral z = make_chart(c);
  const auto pt = c.numbers("loj", "point");
  if (pt.size() != 2) config_error("[loj] point", "expected 'x y'");
  const Point p{pt[0], pt[1]};
  const double rho = positive(c, "loj", "rho", 0.5);
  const long samples = c.integer("loj", "samples", 20000);
  if (samples < 100) config_error("[loj] samples", "need at least 100 samples");
  std::vector<int> ks;
  if (c.has("loj", "inequality_k"))
    for (double k : c.numbers("loj", "inequality_k")) {
      if (k < 1 || k != std::floor(k) || k > 99) config_error("[loj] inequality_k", "expected integers in 1..99");
      ks.push_back(static_cast<int>(k));
    }
  const long ineq_n = c.integer("loj", "inequality_samples", 1000000);
  if (ineq_n < 1) config_error("[loj] inequality_samples", "must be positive");
  const double constant = positive(c, "loj", "inequality_constant", 1.0);
  const bool strata = c.flag("loj", "strata", false);
  std::optional<FactoredPolynomial> fp;
  if (strata) {
    if (c.text("chart", "variant") != "polynomial") config_error("[loj] strata", "needs variant = polynomial");
    fp = chart_factors(c);
  }
  const Region region = omega_of(c, z);
  return [=](RunResult& r) {
    const auto est = estimate_mu(z, p, rho, static_cast<std::size_t>(samples), seed);
    auto& lad = r.table("loj_ladder.csv", {"j", "t", "dz", "local_slope"});
    for (const auto& row : est.ladder) lad.row({num(row.j), num(row.t), num(row.dz), num(row.local_slope)});
    auto& sum = r.table("loj_summary.csv", {"x", "y", "rho", "mu_hat", "c_hat", "mu_pair", "n_samples",
                                            "max_violation", "fit_residual", "intercept"});
    sum.row({num(p.x), num(p.y), num(rho), num(est.mu_hat), num(est.c_hat), num(est.mu_pair), num(est.n_samples),
             num(est.max_violation), num(est.fit_residual), num(est.intercept)});
    r.summary["mu_hat"] = est.mu_hat;
    r.summary["c_hat"] = est.c_hat;
    if (!ks.empty()) {
      auto& iq = r.table("inequality.csv", {"k", "samples", "constant", "max_violation", "holds"});
      for (int k : ks) {
        const double v = check_inequality_arc(k, static_cast<std::size_t>(ineq_n), seed,
                                              Region::rectangle(-1, 1, -1, 1), constant);
        iq.row({num(k), num(static_cast<std::size_t>(ineq_n)), num(constant), num(v), boolean(v <= 1e-12)});
      }
    }
    if (fp) {
      const auto d = decompose_example(*fp, region);
      const auto ex = strata_exponents(d);
      const auto region_mu = loj_number_region(ex);
      auto& st = r.table("strata.csv", {"stratum", "exponent"});
      for (const auto& [name, mu] : ex) st.row({name, num(mu)});
      st.row({"region max (" + region_mu.argmax + ")", num(region_mu.mu)});
      r.summary["region_mu"] = region_mu.mu;
    }
  };
}

Computation prepare_kernel(const Config& c, std::uint64_t) {
  const FirstIntegral z = make_chart(c);
  const Region omega = omega_of(c, z);
  const QuadratureSpec spec = make_spec(c);
  const auto qs = c.numbers("kernel", "q");
  for (double q : qs)
    if (!(q > 0)) config_error("[kernel] q", "exponents must be positive");
  if (c.has("kernel", "points") == c.has("kernel", "grid"))
    config_error("[kernel]", "give exactly one of 'grid' or 'points'");
  if (c.has("kernel", "layout") && !c.has("kernel", "grid")) config_error("[kernel] layout", "needs 'grid'");
  std::vector<Point> pts;
  if (c.has("kernel", "points")) {
    pts = make_points(c, "kernel", "points");
  } else {
    const Grid g = make_grid(c, "kernel", omega);
    for (std::size_t i = 0; i < g.size(); ++i) pts.push_back(g.node(i));
  }
  const double ff = c.number("kernel", "floor_factor", 100.0);
  if (!(ff > 1)) config_error("[kernel] floor_factor", "must exceed 1");
  return [=](RunResult& r) {
    auto& t = r.table("kernel_norms.csv", {"x", "y", "q", "norm", "norm_coarse", "error_estimate", "converged",
                                           "diverging", "characteristic"});
    auto& s = r.table("kernel_summary.csv",
                      {"q", "sup_norm", "refinement_ratio", "sigma_point_ratio", "all_converged"});
    for (double q : qs) {
      const auto rep = kernel_sup_experiment(z, omega, q, pts, spec, ff);
      for (std::size_t i = 0; i < pts.size(); ++i)
        t.row({num(pts[i].x), num(pts[i].y), num(q), num(rep.fine[i].value), num(rep.coarse[i].value),
               num(rep.fine[i].error_estimate), boolean(rep.fine[i].converged), boolean(rep.fine[i].diverging),
               boolean(on_sigma(z, pts[i]))});
      s.row({num(q), num(rep.sup_norm), num(rep.refinement_ratio), num(rep.sigma_point_ratio),
             boolean(rep.all_converged)});
      r.flag(fmt::format("kernel q={}", q), rep.all_converged);
    }
  };
}

Computation prepare_scaling(const Config& c, std::uint64_t) {
  const QuadratureSpec spec = make_spec(c);
  const double tau = c.number("scaling", "tau");
  const double q = c.number("scaling", "q");
  if (!(tau > 0 && tau <= 1)) config_error("[scaling] tau", "expected 0 < tau <= 1");
  if (!(q >= 0)) config_error("[scaling] q", "must be non-negative");
  const auto rhos = c.numbers("scaling", "rho");
  if (rhos.size() < 2) config_error("[scaling] rho", "need at least two radii");
  for (double rho : rhos)
    if (!(rho > 0)) config_error("[scaling] rho", "radii must be positive");
  return [=](RunResult& r) {
    auto& t = r.table("scaling.csv", {"rho", "integral", "error_estimate", "converged"});
    std::vector<double> lx, ly;
    for (double rho : rhos) {
      const auto res = integrate_quasihomogeneous(tau, q, rho, spec);
      t.row({num(rho), num(res.value.real()), num(res.error_estimate), boolean(res.converged)});
      r.flag(fmt::format("rho={}", rho), res.converged);
      lx.push_back(std::log(rho));
      ly.push_back(std::log(res.value.real()));
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / double(lx.size());
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / double(ly.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    auto variation = [&](double e) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        const double v = std::exp(ly[i] - e * lx[i]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      return hi / lo;
    };
    auto& s = r.table("scaling_summary.csv", {"exponent", "value", "ratio_variation"});
    s.row({"fitted", num(slope), num(variation(slope))});
    s.row({"substituted (1+tau-q)/tau", num((1 + tau - q) / tau), num(variation((1 + tau - q) / tau))});
    s.row({"unsubstituted 1+tau-q", num(1 + tau - q), num(variation(1 + tau - q))});
    r.summary["fitted_exponent"] = slope;
  };
}

Computation prepare_solve(const Config& c, std::uint64_t) {
  const FirstIntegral z = make_chart(c);
  const Region omega = omega_of(c, z);
  QuadratureSpec spec = make_spec(c);
  QuadratureSpec l1_spec = spec;
  const Field f = make_field("[solve] f", c.text("solve", "f"), &spec);
  const Grid grid = make_grid(c, "solve", omega);
  const double band = c.number("solve", "band", 0.1);
  if (!(band >= 0)) config_error("[solve] band", "must be non-negative");
  const double fd = positive(c, "solve", "fd_step", 1e-3);
  const double p = c.number("solve", "p", 2.0);
  if (!(p >= 1)) config_error("[solve] p", "must be at least 1");
  const Complex norm = normalization_of(c, "solve");
  const bool verify = c.flag("solve", "verify", true);
  std::optional<Field> l1_f;
  double l1_q = 0;
  long l1_n = 10;
  if (c.has("solve", "l1_f")) {
    l1_f = make_field("[solve] l1_f", c.text("solve", "l1_f"), &l1_spec);
    l1_q = positive(c, "solve", "l1_q", 1.25);
    l1_n = c.integer("solve", "l1_n", 10);
    if (l1_n < 2 || l1_n > 200) config_error("[solve] l1_n", "expected 2..200");
  } else if (c.has("solve", "l1_q") || c.has("solve", "l1_n")) {
    config_error("[solve] l1_q", "needs l1_f");
  }
  return [=](RunResult& r) {
    const Complex n = resolve(norm);
    const auto u = apply_TZ(z, omega, f, grid, spec, n, p);
    ResidualReport res;
    res.relative.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    if (verify) res = verify_solution(z, omega, f, u, fd, band);
    auto& t = r.table("solve.csv", {"x", "y", "re_u", "im_u", "converged", "residual"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point g = grid.node(i);
      t.row({num(g.x), num(g.y), num(u.values[i].real()), num(u.values[i].imag()), boolean(u.converged[i]),
             num(res.relative[i])});
    }
    auto& s = r.table("solve_summary.csv", {"quantity", "value"});
    s.row({"normalization_re", num(n.real())});
    s.row({"normalization_im", num(n.imag())});
    s.row({"f_norm_p", num(u.f_norm_p)});
    s.row({"p", num(p)});
    s.row({"sup_abs_u", num(u.sup_abs())});
    s.row({"sup_over_f_norm", num(u.sup_abs() / u.f_norm_p)});
    if (verify) {
      s.row({"max_relative_residual", num(res.max_relative)});
      s.row({"median_relative_residual", num(res.median_relative)});
      s.row({"nodes_checked", num(res.nodes_checked)});
      r.summary["median_relative_residual"] = res.median_relative;
    }
    r.summary["sup_over_f_norm"] = u.sup_abs() / u.f_norm_p;
    r.flag("apply_TZ", u.all_converged());
    if (l1_f) {
      const auto l1 = TZ_of_L1_function(z, omega, *l1_f, l1_q, l1_spec, n, static_cast<std::size_t>(l1_n));
      s.row({"l1_q", num(l1_q)});
      s.row({"l1_norm_coarse", num(l1.norm_coarse)});
      s.row({"l1_norm_fine", num(l1.norm_fine)});
      s.row({"l1_relative_change", num(l1.relative_change)});
      s.row({"l1_stable", boolean(l1.stable)});
      r.flag("TZ_of_L1", l1.all_converged);
      r.summary["l1_stable"] = l1.stable;
    }
  };
}

Computation prepare_cauchy(const Config& c, std::uint64_t) {
  const FirstIntegral z = make_chart(c);
  const Region omega = omega_of(c, z);
  const QuadratureSpec spec = make_spec(c);
  const SmoothFunction w = make_smooth("[cauchy] w", c.text("cauchy", "w"), z);
  const auto pts = make_points(c, "cauchy", "points");
  const Complex norm = normalization_of(c, "cauchy");
  return [=](RunResult& r) {
    const auto chk = cauchy_formula_check(z, omega, w, pts, spec, resolve(norm));
    auto& t = r.table("cauchy.csv", {"x", "y", "rel_error"});
    for (std::size_t i = 0; i < chk.points.size(); ++i)
      t.row({num(chk.points[i].x), num(chk.points[i].y), num(chk.rel_errors[i])});
    auto& s = r.table("cauchy_summary.csv", {"points_evaluated", "skipped", "max_rel_error"});
    s.row({num(chk.points.size()), num(chk.skipped), num(chk.max_rel_error)});
    r.summary["max_rel_error"] = chk.max_rel_error;
  };
}

Computation prepare_similarity(const Config& c, std::uint64_t) {
  const FirstIntegral z = make_chart(c);
  const Region omega = omega_of(c, z);
  if (!omega.is_rectangle()) config_error("[region] shape", "similarity runs need a rectangle");
  QuadratureSpec spec = make_spec(c);
  const auto H = make_holomorphic("[similarity] H", c.text("similarity", "H"));
  const Field A = make_field("[similarity] A", c.text("similarity", "A"), &spec);
  const Field B = make_field("[similarity] B", c.text("similarity", "B"), &spec);
  const Grid grid = make_grid(c, "similarity", omega);
  SimilarityOptions o;
  const long it = c.integer("similarity", "max_iter", static_cast<long>(o.max_iter));
  if (it < 1 || it > 1000) config_error("[similarity] max_iter", "expected 1..1000");
  o.max_iter = static_cast<std::size_t>(it);
  o.tol = positive(c, "similarity", "tol", o.tol);
  o.band = c.number("similarity", "band", o.band);
  o.fd_step = positive(c, "similarity", "fd_step", o.fd_step);
  o.zero_threshold_rel = positive(c, "similarity", "zero_threshold_rel", o.zero_threshold_rel);
  o.p = c.number("similarity", "p", o.p);
  if (!(o.p >= 1)) config_error("[similarity] p", "must be at least 1");
  const Complex norm = normalization_of(c, "similarity");
  const bool factor = c.flag("similarity", "factor", true);
  return [=](RunResult& r) {
    const Complex n = resolve(norm);
    const auto sol = fixed_point_solve(z, omega, H, A, B, grid, spec, n, o);
    auto& t = r.table("similarity.csv", {"x", "y", "re_u", "im_u", "re_s", "im_s", "abs_chi", "residual"});
    const double umax = sol.u.sup_abs();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point g = grid.node(i);
      const Complex u = sol.u.values[i], s = sol.s.values[i];
      t.row({num(g.x), num(g.y), num(u.real()), num(u.imag()), num(s.real()), num(s.imag()),
             num(std::abs(chi(u, o.zero_threshold_rel * umax))), num(sol.residuals[i])});
    }
    auto& ch = r.table("changes.csv", {"iteration", "max_change"});
    for (std::size_t i = 0; i < sol.changes.size(); ++i) ch.row({num(i + 1), num(sol.changes[i])});
    auto& s = r.table("similarity_summary.csv", {"quantity", "value"});
    s.row({"iterations", num(sol.iterations)});
    s.row({"converged", boolean(sol.converged)});
    s.row({"max_contraction", num(sol.max_contraction)});
    s.row({"residual_max", num(sol.residual_max)});
    s.row({"residual_nodes", num(sol.residual_nodes)});
    s.row({"s_sup", num(sol.s_sup)});
    s.row({"forcing_norm_p", num(sol.forcing_norm_p)});
    s.row({"chi_max_abs", num(sol.chi_max_abs)});
    s.row({"u_min_abs", num(sol.u_min_abs)});
    r.summary["max_contraction"] = sol.max_contraction;
    r.summary["residual_max"] = sol.residual_max;
    r.flag("fixed_point", sol.converged);
    if (factor) {
      const auto fac = factor_solution(z, omega, sol.u, A, B, spec, n, o, &sol.H);
      s.row({"holo_residual", num(fac.holo_residual)});
      s.row({"cr_residual", num(fac.cr_residual)});
      s.row({"h_deviation", num(fac.h_deviation)});
      r.summary["h_deviation"] = fac.h_deviation;
      r.flag("factorization", fac.s.all_converged());
    }
  };
}

}  // namespace

Complex calibrated_normalization() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  return calibrate_normalization(FirstIntegral::elliptic(Region::disc({0, 0}, 1.5)), Region::disc({0, 0}, 1.0), spec);
}

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> all{
      {"charset",
       with_common({{"chart", kChartKeys}, {"region", kRegionKeys}, {"charset", {"stated_orders"}}}),
       prepare_charset},
      {"loj-estimate",
       with_common({{"chart", kChartKeys},
                    {"region", kRegionKeys},
                    {"loj", {"point", "rho", "samples", "inequality_k", "inequality_samples", "inequality_constant",
                             "strata"}}}),
       prepare_loj},
      {"kernel-norm",
       with_common({{"chart", kChartKeys},
                    {"region", kRegionKeys},
                    {"quadrature", kQuadKeys},
                    {"kernel", {"q", "grid", "layout", "points", "floor_factor"}}}),
       prepare_kernel},
      {"scaling", with_common({{"quadrature", kQuadKeys}, {"scaling", {"tau", "q", "rho"}}}), prepare_scaling},
      {"solve",
       with_common({{"chart", kChartKeys},
                    {"region", kRegionKeys},
                    {"quadrature", kQuadKeys},
                    {"solve", {"f", "grid", "layout", "band", "fd_step", "p", "normalization", "verify", "l1_f",
                               "l1_q", "l1_n"}}}),
       prepare_solve},
      {"cauchy-check",
       with_common({{"chart", kChartKeys},
                    {"region", kRegionKeys},
                    {"quadrature", kQuadKeys},
                    {"cauchy", {"w", "points", "normalization"}}}),
       prepare_cauchy},
      {"similarity",
       with_common({{"chart", kChartKeys},
                    {"region", kRegionKeys},
                    {"quadrature", kQuadKeys},
                    {"similarity", {"H", "A", "B", "grid", "layout", "max_iter", "tol", "band", "fd_step",
                                    "zero_threshold_rel", "p", "normalization", "factor"}}}),
       prepare_similarity},
  };
  return all;
}

}  // namespace hypocauchy::cli
