#include "hypocauchy/charset.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hypocauchy/error.hpp"

namespace hypocauchy {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using Univariate = std::vector<Rational>;  // lowest power first

void trim(Univariate& u) {
  while (!u.empty() && u.back() == 0) u.pop_back();
}

Univariate mul(const Univariate& a, const Univariate& b) {
  if (a.empty() || b.empty()) return {};
  Univariate out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

Rational eval(const Univariate& u, const Rational& x) {
  Rational s = 0;
  for (std::size_t k = u.size(); k-- > 0;) s = s * x + u[k];
  return s;
}

double eval_d(const Univariate& u, double x) {
  double s = 0;
  for (std::size_t k = u.size(); k-- > 0;) s = s * x + u[k].get_d();
  return s;
}

// F(x, g(x)) as a univariate polynomial in x.
Univariate substitute_graph(const BivariatePolynomial& f, const Univariate& g) {
  const int dy = f.degree_y();
  std::vector<Univariate> gp(static_cast<std::size_t>(std::max(dy, 0) + 1));
  gp[0] = {Rational(1)};
  for (int j = 1; j <= dy; ++j) gp[j] = mul(gp[j - 1], g);
  Univariate out;
  for (const auto& [e, c] : f.terms()) {
    Univariate xi(static_cast<std::size_t>(e.first + 1), Rational(0));
    xi[e.first] = c;
    const Univariate term = mul(xi, gp[e.second]);
    if (out.size() < term.size()) out.resize(term.size(), Rational(0));
    for (std::size_t k = 0; k < term.size(); ++k) out[k] += term[k];
  }
  trim(out);
  return out;
}

// F(x0, y) as a univariate polynomial in y.
Univariate substitute_vertical(const BivariatePolynomial& f, const Rational& x0) {
  return restrict_to_line(f, {x0, Rational(0)}, Axis::Y);
}

// Best rational approximation with bounded denominator (continued fractions).
Rational rationalize(double v, long long max_den = 1000000) {
  if (!std::isfinite(v)) return Rational(0);
  const bool neg = v < 0;
  double x = std::abs(v);
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(x);
    if (a > 1e15) break;
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  if (k1 == 0) return Rational(0);
  Rational r(mpz_class(std::to_string(h1)), mpz_class(std::to_string(k1)));
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

struct Root {
  double value;
  Rational exact;
  bool is_exact;
};

std::vector<Root> real_roots(Univariate u) {
  trim(u);
  std::vector<Root> out;
  if (u.size() <= 1) return out;
  // x^m factor
  std::size_t m = 0;
  while (m < u.size() && u[m] == 0) ++m;
  if (m > 0) {
    out.push_back({0.0, Rational(0), true});
    u.erase(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(m));
  }
  if (u.size() <= 1) return out;
  // Normalise to the largest coefficient for the companion solve.
  Rational big = 0;
  for (const auto& c : u) big = std::max(big, Rational(abs(c)));
  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(u.size()));
  for (std::size_t k = 0; k < u.size(); ++k) coeffs[static_cast<Eigen::Index>(k)] = Rational(u[k] / big).get_d();
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
  solver.compute(coeffs);
  std::vector<double> candidates;
  for (const auto& r : solver.roots()) {
    if (std::abs(r.imag()) <= 1e-6 * std::max(1.0, std::abs(r.real()))) candidates.push_back(r.real());
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<double> unique;
  for (double c : candidates) {
    if (unique.empty() || std::abs(c - unique.back()) > 1e-6 * std::max(1.0, std::abs(c))) unique.push_back(c);
  }
  Univariate du;
  for (std::size_t k = 1; k < u.size(); ++k) du.push_back(u[k] * static_cast<long>(k));
  for (double c : unique) {
    const Rational q = rationalize(c);
    if (eval(u, q) == 0) {
      out.push_back({q.get_d(), q, true});
      continue;
    }
    double x = c;
    for (int it = 0; it < 8; ++it) {
      const double d = eval_d(du, x);
      if (d == 0) break;
      x -= eval_d(u, x) / d;
    }
    out.push_back({x, Rational(x), false});
  }
  return out;
}

bool perfect_square(const Rational& r, Rational& root) {
  if (r < 0) return false;
  const mpz_class n = r.get_num();
  const mpz_class d = r.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0 || mpz_perfect_square_p(d.get_mpz_t()) == 0) return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  root = Rational(sn, sd);
  root.canonicalize();
  return true;
}

std::string rat_str(const Rational& r) { return r.get_str(); }

// Zero set of one base factor.
struct FactorShape {
  enum class Kind { Empty, Point, Curves } kind = Kind::Empty;
  RationalPoint point;
  std::vector<Curve> curves;
};

[[noreturn]] void unsupported(std::size_t index, const BivariatePolynomial& f) {
  throw Error(ErrorCode::UnsupportedFactor,
              "factor " + std::to_string(index) + " not recognised: " + f.to_string());
}

Curve make_line(std::size_t idx, Rational a, Rational b, Rational c) {
  Curve cv;
  cv.kind = CurveKind::Line;
  cv.factor_index = idx;
  cv.a = std::move(a);
  cv.b = std::move(b);
  cv.c = std::move(c);
  std::vector<Term> t{{1, 0, cv.a}, {0, 1, cv.b}, {0, 0, cv.c}};
  cv.implicit = BivariatePolynomial::from_terms(t);
  return cv;
}

FactorShape recognise(std::size_t idx, const BivariatePolynomial& f) {
  FactorShape out;
  if (f.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero factor");
  const int deg = f.degree();
  if (deg == 0) return out;  // nonzero constant
  if (f.terms().size() == 1) {
    const auto [i, j] = f.terms().begin()->first;
    out.kind = FactorShape::Kind::Curves;
    if (j > 0) out.curves.push_back(make_line(idx, 0, 1, 0));
    if (i > 0) out.curves.push_back(make_line(idx, 1, 0, 0));
    return out;
  }
  if (deg == 1) {
    out.kind = FactorShape::Kind::Curves;
    out.curves.push_back(make_line(idx, f.coeff(1, 0), f.coeff(0, 1), f.coeff(0, 0)));
    return out;
  }
  // Circle or point: A(x^2 + y^2) + D x + E y + F.
  const Rational a2 = f.coeff(2, 0);
  if (deg == 2 && a2 != 0 && a2 == f.coeff(0, 2) && f.coeff(1, 1) == 0) {
    const Rational d = f.coeff(1, 0) / a2;
    const Rational e = f.coeff(0, 1) / a2;
    const Rational ff = f.coeff(0, 0) / a2;
    const Rational cx = -d / 2;
    const Rational cy = -e / 2;
    const Rational r2 = cx * cx + cy * cy - ff;
    if (r2 < 0) return out;
    if (r2 == 0) {
      out.kind = FactorShape::Kind::Point;
      out.point = {cx, cy};
      return out;
    }
    Curve cv;
    cv.kind = CurveKind::Circle;
    cv.factor_index = idx;
    cv.implicit = f.scaled(1 / a2);
    cv.cx = cx;
    cv.cy = cy;
    cv.r2 = r2;
    out.kind = FactorShape::Kind::Curves;
    out.curves.push_back(cv);
    return out;
  }
  // Graph: b y + h(x) with b constant.
  if (f.degree_y() == 1 && f.coeff(0, 1) != 0) {
    bool graph = true;
    for (const auto& [e, c] : f.terms()) {
      if (e.second == 1 && e.first != 0) graph = false;
    }
    if (graph) {
      const Rational b = f.coeff(0, 1);
      Curve cv;
      cv.kind = CurveKind::Graph;
      cv.factor_index = idx;
      cv.implicit = f.scaled(1 / b);
      cv.graph.assign(static_cast<std::size_t>(f.degree_x() + 1), Rational(0));
      for (const auto& [e, c] : f.terms()) {
        if (e.second == 0) cv.graph[e.first] = -c / b;
      }
      trim(cv.graph);
      out.kind = FactorShape::Kind::Curves;
      out.curves.push_back(cv);
      return out;
    }
  }
  unsupported(idx, f);
}

bool is_vertical(const Curve& c) { return c.kind == CurveKind::Line && c.b == 0; }

// y = g(x) description of a graph or non-vertical line.
Univariate as_graph(const Curve& c) {
  if (c.kind == CurveKind::Graph) return c.graph;
  Univariate g{-c.c / c.b, -c.a / c.b};
  trim(g);
  return g;
}

struct Candidate {
  Point p;
  RationalPoint exact;
  bool is_exact;
};

std::vector<Candidate> intersect(const Curve& u, const Curve& v);

std::vector<Candidate> intersect_graph(const Curve& g, const Curve& other) {
  const Univariate gy = as_graph(g);
  const Univariate s = substitute_graph(other.implicit, gy);
  std::vector<Candidate> out;
  if (s.empty()) return out;  // same curve
  for (const auto& r : real_roots(s)) {
    if (r.is_exact) {
      const Rational y = eval(gy, r.exact);
      out.push_back({{r.exact.get_d(), y.get_d()}, {r.exact, y}, true});
    } else {
      const double y = eval_d(gy, r.value);
      out.push_back({{r.value, y}, to_rational(r.value, y), false});
    }
  }
  return out;
}

std::vector<Candidate> intersect(const Curve& u, const Curve& v) {
  if (!is_vertical(u) && u.kind != CurveKind::Circle) return intersect_graph(u, v);
  if (!is_vertical(v) && v.kind != CurveKind::Circle) return intersect_graph(v, u);
  if (is_vertical(u) || is_vertical(v)) {
    const Curve& vert = is_vertical(u) ? u : v;
    const Curve& other = is_vertical(u) ? v : u;
    const Rational x0 = -vert.c / vert.a;
    const Univariate s = substitute_vertical(other.implicit, x0);
    std::vector<Candidate> out;
    if (s.empty()) return out;
    for (const auto& r : real_roots(s)) {
      out.push_back({{x0.get_d(), r.value}, {x0, r.exact}, r.is_exact});
    }
    return out;
  }
  // Two circles: the radical axis is a line.
  const BivariatePolynomial diff = u.implicit - v.implicit;
  if (diff.is_zero()) return {};
  if (diff.degree() < 1) return {};
  Curve axis = make_line(0, diff.coeff(1, 0), diff.coeff(0, 1), diff.coeff(0, 0));
  return intersect(axis, u);
}

double param_of(const Curve& c, Point p) {
  switch (c.kind) {
    case CurveKind::Circle: {
      double a = std::atan2(p.y - c.cy.get_d(), p.x - c.cx.get_d());
      if (a < 0) a += kTwoPi;
      return a;
    }
    case CurveKind::Line:
      return is_vertical(c) ? p.y : p.x;
    case CurveKind::Graph:
      return p.x;
  }
  return 0.0;
}

Point point_at(const Curve& c, double t) {
  switch (c.kind) {
    case CurveKind::Circle: {
      const double r = std::sqrt(c.r2.get_d());
      return {c.cx.get_d() + r * std::cos(t), c.cy.get_d() + r * std::sin(t)};
    }
    case CurveKind::Line:
      if (is_vertical(c)) return {Rational(-c.c / c.a).get_d(), t};
      return {t, eval_d(as_graph(c), t)};
    case CurveKind::Graph:
      return {t, eval_d(c.graph, t)};
  }
  return {};
}

// Exact point for parameter t when the curve admits a rational one.
std::optional<RationalPoint> exact_point_at(const Curve& c, double t) {
  switch (c.kind) {
    case CurveKind::Line:
      if (is_vertical(c)) return RationalPoint{-c.c / c.a, Rational(t)};
      return RationalPoint{Rational(t), eval(as_graph(c), Rational(t))};
    case CurveKind::Graph:
      return RationalPoint{Rational(t), eval(c.graph, Rational(t))};
    case CurveKind::Circle: {
      Rational r;
      if (!perfect_square(c.r2, r)) return std::nullopt;
      // Rational parametrisation through u = tan(t / 2); t = pi is the limit point.
      if (std::abs(std::cos(0.5 * t)) < 1e-12) return RationalPoint{c.cx - r, c.cy};
      const Rational u = rationalize(std::tan(0.5 * t), 1000000000LL);
      const Rational den = 1 + u * u;
      return RationalPoint{c.cx + r * (1 - u * u) / den, c.cy + r * 2 * u / den};
    }
  }
  return std::nullopt;
}

bool vertical_tangent_in(const Curve& c, double lo, double hi) {
  if (is_vertical(c)) return true;
  if (c.kind != CurveKind::Circle) return false;
  for (double a : {0.0, std::numbers::pi, kTwoPi}) {
    if (a >= lo - 1e-12 && a <= hi + 1e-12) return true;
  }
  return false;
}

std::string describe_arc(const Curve& c, double lo, double hi, bool closed) {
  std::ostringstream os;
  os.precision(6);
  os << c.describe();
  if (closed) {
    os << " (closed)";
  } else if (c.kind == CurveKind::Circle) {
    os << " angle in [" << lo << "," << hi << "]";
  } else {
    os << (is_vertical(c) ? " y in [" : " x in [") << lo << "," << hi << "]";
  }
  return os.str();
}

}  // namespace

std::string Curve::describe() const {
  switch (kind) {
    case CurveKind::Line:
      return "line " + rat_str(a) + "*x + " + rat_str(b) + "*y + " + rat_str(c) + " = 0";
    case CurveKind::Graph: {
      BivariatePolynomial g;
      for (std::size_t k = 0; k < graph.size(); ++k) g += BivariatePolynomial::monomial(static_cast<int>(k), 0, graph[k]);
      return "graph y = " + g.to_string();
    }
    case CurveKind::Circle:
      return "circle center (" + rat_str(cx) + "," + rat_str(cy) + ") radius^2 " + rat_str(r2);
  }
  return "curve";
}

int order_at(const BivariatePolynomial& q, const RationalPoint& p) {
  const auto o = transversal_order(q, p, Axis::Y);
  if (o.infinite) throw Error(ErrorCode::InvalidArgument, "infinite order (Q constant along the y line)");
  return o.value;
}

CharClassification classify_point(const FirstIntegral& z, Point p) {
  if (!z.in_domain(p)) throw Error(ErrorCode::OutOfDomain, "classify_point outside domain");
  CharClassification out;
  if (const auto* q = z.imaginary_part()) {
    const RationalPoint rp = to_rational(p.x, p.y);
    out.exact = true;
    // Im(Z_x conj Z_y) = -|lambda|^2 dQ/dy for Z = lambda (x + i Q).
    const bool characteristic = z.density()->eval(rp) == 0;
    out.kind = characteristic ? PointKind::Characteristic : PointKind::Elliptic;
    const auto o = transversal_order(*q, rp, Axis::Y);
    if (!o.infinite) out.order = o.value;
    return out;
  }
  const auto [zx, zy] = z.grad_unchecked(p);
  const double scale = std::abs(zx) * std::abs(zy);
  const double im = std::imag(zx * std::conj(zy));
  const bool characteristic = scale == 0.0 || std::abs(im) < 1e-12 * scale;
  out.kind = characteristic ? PointKind::Characteristic : PointKind::Elliptic;
  if (z.kind() == ChartKind::CircleNormal) {
    out.order = characteristic ? z.k() : 1;
    out.exact = p.y == 0.0 || !characteristic;
  }
  return out;
}

SigmaDecomposition decompose_example(const FactoredPolynomial& fp, const Region& region,
                                     const std::map<std::size_t, int>& stated_orders) {
  SigmaDecomposition d;
  d.p = fp.expand();
  d.q = antiderivative_y(d.p);

  std::vector<RationalPoint> point_zeros;
  for (std::size_t i = 0; i < fp.factors.size(); ++i) {
    FactorShape s = recognise(i, fp.factors[i].base);
    if (s.kind == FactorShape::Kind::Point) point_zeros.push_back(s.point);
    for (auto& c : s.curves) {
      const bool dup = std::any_of(d.curves.begin(), d.curves.end(), [&](const Curve& o) {
        return o.kind == c.kind && (o.implicit == c.implicit ||
                                    (c.kind == CurveKind::Line && o.a * c.b == o.b * c.a &&
                                     o.a * c.c == o.c * c.a && o.b * c.c == o.c * c.b));
      });
      if (!dup) d.curves.push_back(std::move(c));
    }
  }

  auto on_curve = [](const Curve& c, const Candidate& p) {
    if (p.is_exact) return c.implicit.eval(p.exact) == 0;
    return std::abs(PolyEvaluator(c.implicit)(p.p.x, p.p.y)) < 1e-9;
  };
  auto make_stratum = [&](const Candidate& c) {
    StratumPoint sp;
    sp.point = c.p;
    sp.exact_point = c.exact;
    sp.exact = c.is_exact && d.p.eval(c.exact) == 0;
    sp.order = order_at(d.q, c.exact);
    return sp;
  };
  auto add_unique = [](std::vector<StratumPoint>& v, StratumPoint sp) {
    for (const auto& o : v) {
      if ((o.exact && sp.exact && o.exact_point.x == sp.exact_point.x && o.exact_point.y == sp.exact_point.y) ||
          distance(o.point, sp.point) < 1e-9) {
        return;
      }
    }
    v.push_back(std::move(sp));
  };

  const double slack = 1e-12;
  // Isolated zeros: on a curve they become singular points.
  for (const auto& rp : point_zeros) {
    const Candidate cand{{rp.x.get_d(), rp.y.get_d()}, rp, true};
    if (!region.contains(cand.p, slack)) continue;
    const bool on_any = std::any_of(d.curves.begin(), d.curves.end(), [&](const Curve& c) { return on_curve(c, cand); });
    add_unique(on_any ? d.singular_points : d.isolated_points, make_stratum(cand));
  }
  // Pairwise crossings of one-dimensional strata.
  for (std::size_t i = 0; i < d.curves.size(); ++i) {
    for (std::size_t j = i + 1; j < d.curves.size(); ++j) {
      for (const auto& cand : intersect(d.curves[i], d.curves[j])) {
        if (region.contains(cand.p, slack)) add_unique(d.singular_points, make_stratum(cand));
      }
    }
  }
  auto by_xy = [](const StratumPoint& a, const StratumPoint& b) {
    return a.point.x != b.point.x ? a.point.x < b.point.x : a.point.y < b.point.y;
  };
  std::sort(d.isolated_points.begin(), d.isolated_points.end(), by_xy);
  std::sort(d.singular_points.begin(), d.singular_points.end(), by_xy);

  // Regular arcs: split each curve at singular points, keep the parts inside the region.
  for (std::size_t ci = 0; ci < d.curves.size(); ++ci) {
    const Curve& c = d.curves[ci];
    std::vector<double> breaks;
    for (const auto& sp : d.singular_points) {
      if (on_curve(c, {sp.point, sp.exact_point, sp.exact})) breaks.push_back(param_of(c, sp.point));
    }
    std::sort(breaks.begin(), breaks.end());

    std::vector<std::pair<double, double>> intervals;
    bool periodic = c.kind == CurveKind::Circle;
    if (periodic) {
      if (breaks.empty()) {
        intervals.emplace_back(0.0, kTwoPi);
      } else {
        for (std::size_t k = 0; k + 1 < breaks.size(); ++k) intervals.emplace_back(breaks[k], breaks[k + 1]);
        intervals.emplace_back(breaks.back(), breaks.front() + kTwoPi);
      }
    } else {
      double lo = is_vertical(c) ? region.y_lo() : region.x_lo();
      double hi = is_vertical(c) ? region.y_hi() : region.x_hi();
      std::vector<double> cuts{lo};
      for (double b : breaks) {
        if (b > lo && b < hi) cuts.push_back(b);
      }
      cuts.push_back(hi);
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) intervals.emplace_back(cuts[k], cuts[k + 1]);
    }

    for (const auto& [lo, hi] : intervals) {
      // Runs of the open interval lying inside the region.
      constexpr int n = 4000;
      int run_start = -1;
      auto close_run = [&](int a, int b) {
        const double plo = lo + (hi - lo) * a / n;
        const double phi = lo + (hi - lo) * b / n;
        RegularComponent rc;
        rc.curve_index = ci;
        rc.factor_index = c.factor_index;
        rc.kind = c.kind;
        rc.param_lo = (a == 1) ? lo : plo;
        rc.param_hi = (b == n - 1) ? hi : phi;
        rc.closed = periodic && breaks.empty() && a == 1 && b == n - 1;
        if (rc.closed) {
          rc.param_lo = 0.0;
          rc.param_hi = kTwoPi;
        }
        rc.vertical_tangent = vertical_tangent_in(c, rc.param_lo, rc.param_hi);
        double mid = 0.5 * (rc.param_lo + rc.param_hi);
        if (c.kind == CurveKind::Circle) {
          // Stay away from the vertical-tangent angles when sampling the order.
          for (double a2 : {0.0, std::numbers::pi, kTwoPi}) {
            if (std::abs(std::fmod(mid, kTwoPi) - a2) < 0.05) mid += 0.25 * (rc.param_hi - rc.param_lo) / 2;
          }
          if (rc.closed) mid = 0.5 * std::numbers::pi;
        }
        rc.sample = point_at(c, std::fmod(mid, kTwoPi + 1e-9));
        if (auto ex = exact_point_at(c, std::fmod(mid, kTwoPi))) {
          rc.sample = {ex->x.get_d(), ex->y.get_d()};
          rc.order_exact = d.p.eval(*ex) == 0;
          rc.order = order_at(d.q, *ex);
        } else {
          // Generic transversal crossing: order is one plus the multiplicity of the factors
          // vanishing on this curve.
          int mult = 0;
          for (std::size_t fi = 0; fi < fp.factors.size(); ++fi) {
            if (std::abs(PolyEvaluator(fp.factors[fi].base)(rc.sample.x, rc.sample.y)) < 1e-9) {
              mult += static_cast<int>(fp.factors[fi].power);
            }
          }
          rc.order = 1 + mult;
          rc.order_exact = false;
        }
        rc.description = describe_arc(c, rc.param_lo, rc.param_hi, rc.closed);
        if (auto it = stated_orders.find(c.factor_index); it != stated_orders.end()) {
          rc.stated_order = it->second;
          rc.discrepancy = it->second != rc.order;
        }
        d.regular_components.push_back(std::move(rc));
      };
      for (int k = 1; k < n; ++k) {
        const double t = lo + (hi - lo) * k / n;
        const bool inside = region.contains(point_at(c, std::fmod(t, kTwoPi + 1e-9)), slack);
        if (inside && run_start < 0) run_start = k;
        if (!inside && run_start >= 0) {
          close_run(run_start, k - 1);
          run_start = -1;
        }
      }
      if (run_start >= 0) close_run(run_start, n - 1);
    }
  }
  return d;
}

std::vector<std::pair<RationalPoint, bool>> component_sample_points(const SigmaDecomposition& d,
                                                                    const RegularComponent& c,
                                                                    int n) {
  const Curve& cv = d.curves.at(c.curve_index);
  std::vector<std::pair<RationalPoint, bool>> out;
  for (int i = 0; i < n; ++i) {
    double t = c.param_lo + (c.param_hi - c.param_lo) * (i + 0.5) / n;
    if (c.kind == CurveKind::Circle) t = std::fmod(t, kTwoPi);
    if (auto ex = exact_point_at(cv, t)) {
      out.emplace_back(*ex, true);
    } else {
      const Point p = point_at(cv, t);
      out.emplace_back(to_rational(p.x, p.y), false);
    }
  }
  return out;
}

}  // namespace hypocauchy
