#include "hypocauchy/structures.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "hypocauchy/error.hpp"
#include "hypocauchy/rng.hpp"

namespace hypocauchy {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDomainSlack = 1e-12;

double int_pow(double base, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

// (t + d)^k - t^k without cancellation.
double power_difference(double t, double d, int k) {
  double sum = 0.0;
  double binom = 1.0;
  for (int m = 1; m <= k; ++m) {
    binom = binom * (k - m + 1) / m;
    sum += binom * int_pow(t, k - m) * int_pow(d, m);
  }
  return sum;
}
}  // namespace

// --------------------------------------------------------------------------- Region

Region Region::rectangle(double x_lo, double x_hi, double y_lo, double y_hi) {
  if (!(x_lo < x_hi) || !(y_lo < y_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi) ||
      !std::isfinite(y_lo) || !std::isfinite(y_hi)) {
    throw Error(ErrorCode::InvalidArgument, "rectangle must have finite bounds and nonempty interior");
  }
  Region r;
  r.shape_ = Shape::Rectangle;
  r.x_lo_ = x_lo;
  r.x_hi_ = x_hi;
  r.y_lo_ = y_lo;
  r.y_hi_ = y_hi;
  r.center_ = {0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi)};
  return r;
}

Region Region::disc(Point center, double radius) {
  if (!(radius > 0) || !std::isfinite(radius) || !std::isfinite(center.x) ||
      !std::isfinite(center.y)) {
    throw Error(ErrorCode::InvalidArgument, "disc radius must be positive and finite");
  }
  Region r;
  r.shape_ = Shape::Disc;
  r.center_ = center;
  r.radius_ = radius;
  r.x_lo_ = center.x - radius;
  r.x_hi_ = center.x + radius;
  r.y_lo_ = center.y - radius;
  r.y_hi_ = center.y + radius;
  return r;
}

bool Region::contains(Point p, double slack) const { return distance_to_boundary(p) >= -slack; }

double Region::distance_to_boundary(Point p) const {
  if (shape_ == Shape::Disc) return radius_ - distance(p, center_);
  const double dx = std::min(p.x - x_lo_, x_hi_ - p.x);
  const double dy = std::min(p.y - y_lo_, y_hi_ - p.y);
  if (dx >= 0 && dy >= 0) return std::min(dx, dy);
  const double ox = std::max(0.0, -dx);
  const double oy = std::max(0.0, -dy);
  return -std::hypot(ox, oy);
}

double Region::area() const {
  if (shape_ == Shape::Disc) return std::numbers::pi * radius_ * radius_;
  return (x_hi_ - x_lo_) * (y_hi_ - y_lo_);
}

double Region::diameter() const {
  if (shape_ == Shape::Disc) return 2.0 * radius_;
  return std::hypot(x_hi_ - x_lo_, y_hi_ - y_lo_);
}

std::string Region::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (shape_ == Shape::Disc) {
    os << "disc(center=(" << center_.x << "," << center_.y << "),radius=" << radius_ << ")";
  } else {
    os << "rectangle([" << x_lo_ << "," << x_hi_ << "]x[" << y_lo_ << "," << y_hi_ << "])";
  }
  return os.str();
}

// --------------------------------------------------------------------------- FirstIntegral

const char* to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::Elliptic: return "elliptic";
    case ChartKind::ArcNormal: return "arc_normal";
    case ChartKind::PointNormal: return "point_normal";
    case ChartKind::CircleNormal: return "circle_normal";
    case ChartKind::PolynomialIntegral: return "polynomial_integral";
  }
  return "unknown";
}

struct FirstIntegral::PolyData {
  BivariatePolynomial q;        // imaginary part
  BivariatePolynomial density;  // dQ/dy
  BivariatePolynomial q_x;
  PolyEvaluator eval_q;
  PolyEvaluator eval_qx;
  PolyEvaluator eval_qy;

  explicit PolyData(BivariatePolynomial imag)
      : q(std::move(imag)),
        density(q.d_dy()),
        q_x(q.d_dx()),
        eval_q(q),
        eval_qx(q_x),
        eval_qy(density) {}
};

namespace {
void require_odd(int k, const char* what) {
  if (k < 1 || k % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": k must be an odd positive integer");
  }
}
}  // namespace

FirstIntegral FirstIntegral::elliptic(Region domain) {
  FirstIntegral z;
  z.kind_ = ChartKind::Elliptic;
  z.domain_ = domain;
  z.poly_ = std::make_shared<PolyData>(BivariatePolynomial::monomial(0, 1));
  return z;
}

FirstIntegral FirstIntegral::arc_normal(int k, Region domain) {
  require_odd(k, "arc_normal");
  FirstIntegral z;
  z.kind_ = ChartKind::ArcNormal;
  z.domain_ = domain;
  z.k_ = k;
  z.poly_ = std::make_shared<PolyData>(BivariatePolynomial::monomial(0, k));
  return z;
}

FirstIntegral FirstIntegral::point_normal(const BivariatePolynomial& psi, Region domain) {
  if (psi.is_zero()) throw Error(ErrorCode::InvalidArgument, "point_normal: psi is zero");
  FirstIntegral z;
  z.kind_ = ChartKind::PointNormal;
  z.domain_ = domain;
  z.poly_ = std::make_shared<PolyData>(antiderivative_y(psi));
  z.k_ = 0;
  return z;
}

FirstIntegral FirstIntegral::circle_normal(int k, double delta) {
  require_odd(k, "circle_normal");
  if (!(delta > 0)) throw Error(ErrorCode::InvalidArgument, "circle_normal: delta must be positive");
  FirstIntegral z;
  z.kind_ = ChartKind::CircleNormal;
  z.domain_ = Region::rectangle(0.0, kTwoPi, -delta, delta);
  z.k_ = k;
  return z;
}

FirstIntegral FirstIntegral::polynomial_integral(const BivariatePolynomial& p, Region domain) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "polynomial_integral: P is zero");
  FirstIntegral z;
  z.kind_ = ChartKind::PolynomialIntegral;
  z.domain_ = domain;
  z.poly_ = std::make_shared<PolyData>(antiderivative_y(p));
  z.k_ = 0;
  return z;
}

FirstIntegral FirstIntegral::scaled(Complex lambda) const {
  if (lambda == Complex(0.0, 0.0)) throw Error(ErrorCode::InvalidArgument, "scale must be nonzero");
  FirstIntegral z = *this;
  z.scale_ *= lambda;
  return z;
}

const BivariatePolynomial* FirstIntegral::imaginary_part() const {
  return poly_ ? &poly_->q : nullptr;
}

const BivariatePolynomial* FirstIntegral::density() const {
  return poly_ ? &poly_->density : nullptr;
}

bool FirstIntegral::in_domain(Point p) const {
  if (kind_ == ChartKind::CircleNormal) {
    return std::isfinite(p.x) && p.y > domain_.y_lo() && p.y < domain_.y_hi();
  }
  return domain_.contains(p, kDomainSlack);
}

namespace {
[[noreturn]] void out_of_domain(Point p, const Region& r) {
  std::ostringstream os;
  os.precision(17);
  os << "point (" << p.x << "," << p.y << ") outside " << r.describe();
  throw Error(ErrorCode::OutOfDomain, os.str());
}
}  // namespace

Complex FirstIntegral::eval(Point p) const {
  if (!in_domain(p)) out_of_domain(p, domain_);
  return eval_unchecked(p);
}

Complex FirstIntegral::eval_unchecked(Point p) const {
  if (kind_ == ChartKind::CircleNormal) {
    double theta = std::fmod(p.x, kTwoPi);
    if (theta < 0) theta += kTwoPi;
    return scale_ * std::exp(Complex(int_pow(p.y, k_), theta));
  }
  return scale_ * Complex(p.x, poly_->eval_q(p.x, p.y));
}

std::pair<Complex, Complex> FirstIntegral::grad(Point p) const {
  if (!in_domain(p)) out_of_domain(p, domain_);
  return grad_unchecked(p);
}

std::pair<Complex, Complex> FirstIntegral::grad_unchecked(Point p) const {
  if (kind_ == ChartKind::CircleNormal) {
    const Complex z = eval_unchecked(p);
    const double dt = k_ * int_pow(p.y, k_ - 1);
    return {Complex(0.0, 1.0) * z, dt * z};
  }
  const Complex zx = scale_ * Complex(1.0, poly_->eval_qx(p.x, p.y));
  const Complex zy = scale_ * Complex(0.0, poly_->eval_qy(p.x, p.y));
  return {zx, zy};
}

double FirstIntegral::characteristic_function(Point p) const {
  const auto [zx, zy] = grad_unchecked(p);
  return std::imag(zx * std::conj(zy));
}

DeltaFunction FirstIntegral::delta_at(Point p) const {
  if (kind_ == ChartKind::CircleNormal) {
    const Complex base = eval_unchecked(p);
    const double t = p.y;
    const int k = k_;
    return [base, t, k](double dx, double dy) {
      const double re = power_difference(t, dy, k);
      const double s = std::sin(0.5 * dx);
      const Complex rot_minus_one(-2.0 * s * s, std::sin(dx));
      const Complex e = std::expm1(re) * (1.0 + rot_minus_one) + rot_minus_one;
      return base * e;
    };
  }
  // Exact Taylor shift at the base point: Q(p + d) - Q(p) has no constant term, so the
  // double evaluation carries no cancellation against Q(p).
  const RationalPoint rp = to_rational(p.x, p.y);
  BivariatePolynomial shifted = poly_->q.shifted(rp.x, rp.y);
  shifted -= BivariatePolynomial(shifted.coeff(0, 0));
  auto eval = std::make_shared<PolyEvaluator>(shifted);
  const Complex scale = scale_;
  return [eval, scale](double dx, double dy) { return scale * Complex(dx, (*eval)(dx, dy)); };
}

double FirstIntegral::distance_to_sigma(Point p, double search) const {
  switch (kind_) {
    case ChartKind::Elliptic: return std::numeric_limits<double>::infinity();
    case ChartKind::ArcNormal:
    case ChartKind::CircleNormal:
      return k_ == 1 ? std::numeric_limits<double>::infinity() : std::abs(p.y);
    case ChartKind::PointNormal:
    case ChartKind::PolynomialIntegral: break;
  }
  // Sampled estimate: the density is nonnegative for admissible structures, so its zeros
  // are local minima. Flag samples whose value is negligible against the box maximum.
  constexpr int n = 41;
  double vmax = 0.0;
  std::vector<std::pair<Point, double>> samples;
  samples.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point q{p.x - search + 2.0 * search * i / (n - 1), p.y - search + 2.0 * search * j / (n - 1)};
      const double v = std::abs(poly_->eval_qy(q.x, q.y));
      vmax = std::max(vmax, v);
      samples.emplace_back(q, v);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  if (vmax == 0.0) return 0.0;
  for (const auto& [q, v] : samples) {
    if (v <= 1e-6 * vmax) best = std::min(best, distance(p, q));
  }
  return best;
}

std::string FirstIntegral::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == ChartKind::ArcNormal || kind_ == ChartKind::CircleNormal) os << "(k=" << k_ << ")";
  if (kind_ == ChartKind::PointNormal || kind_ == ChartKind::PolynomialIntegral) {
    os << "(Q=" << poly_->q.to_string() << ")";
  }
  if (scale_ != Complex(1.0, 0.0)) os << "*(" << scale_.real() << "+" << scale_.imag() << "i)";
  os << " on " << domain_.describe();
  return os.str();
}

// --------------------------------------------------------------------------- invariants

IntegralInvariants check_invariants(const FirstIntegral& z, std::size_t n_samples,
                                    std::uint64_t seed) {
  const Region& d = z.domain();
  auto rng = make_stream(seed, 0);
  std::uniform_real_distribution<double> ux(d.x_lo(), d.x_hi());
  std::uniform_real_distribution<double> uy(d.y_lo(), d.y_hi());
  std::vector<Point> pts;
  pts.reserve(n_samples);
  while (pts.size() < n_samples) {
    const Point p{ux(rng), uy(rng)};
    if (z.in_domain(p) && d.contains(p)) pts.push_back(p);
  }

  IntegralInvariants out;
  out.samples = pts.size();
  std::vector<std::pair<Complex, Point>> images;
  images.reserve(pts.size());
  for (const auto& p : pts) {
    const auto [zx, zy] = z.grad_unchecked(p);
    if (std::abs(zx) + std::abs(zy) <= 0.0) out.nondegenerate = false;
    if (const auto* dens = z.density(); dens != nullptr &&
        (z.kind() == ChartKind::PointNormal || z.kind() == ChartKind::PolynomialIntegral)) {
      if (dens->eval(to_rational(p.x, p.y)) < 0) out.density_nonnegative = false;
    }
    images.emplace_back(z.eval_unchecked(p), p);
  }
  std::sort(images.begin(), images.end(),
            [](const auto& a, const auto& b) { return a.first.real() < b.first.real(); });
  constexpr double kImageTol = 1e-12;
  constexpr double kPreimageSep = 1e-3;
  for (std::size_t i = 0; i < images.size() && out.injective; ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      if (images[j].first.real() - images[i].first.real() > kImageTol) break;
      if (std::abs(images[j].first - images[i].first) <= kImageTol &&
          distance(images[j].second, images[i].second) > kPreimageSep) {
        out.injective = false;
        break;
      }
    }
  }
  return out;
}

// --------------------------------------------------------------------------- L

Complex apply_L(const FirstIntegral& z, Point p, Complex du_dx, Complex du_dy) {
  const auto [zx, zy] = z.grad(p);
  return zx * du_dy - zy * du_dx;
}

std::pair<Complex, Complex> central_partials(const std::function<Complex(Point)>& u, Point p,
                                             double h, int order) {
  if (order == 2) {
    const Complex dx = (u({p.x + h, p.y}) - u({p.x - h, p.y})) / (2.0 * h);
    const Complex dy = (u({p.x, p.y + h}) - u({p.x, p.y - h})) / (2.0 * h);
    return {dx, dy};
  }
  if (order == 4) {
    auto d = [&](double ex, double ey) {
      const Complex f1 = u({p.x + ex * h, p.y + ey * h});
      const Complex fm1 = u({p.x - ex * h, p.y - ey * h});
      const Complex f2 = u({p.x + 2 * ex * h, p.y + 2 * ey * h});
      const Complex fm2 = u({p.x - 2 * ex * h, p.y - 2 * ey * h});
      return (8.0 * (f1 - fm1) - (f2 - fm2)) / (12.0 * h);
    };
    return {d(1, 0), d(0, 1)};
  }
  throw Error(ErrorCode::InvalidArgument, "finite-difference order must be 2 or 4");
}

Complex apply_L(const FirstIntegral& z, const SmoothFunction& u, Point p,
                std::optional<double> fd_step, int fd_order) {
  if (!fd_step) {
    if (!u.has_partials()) {
      throw Error(ErrorCode::InvalidArgument, "apply_L: analytic partials required without fd_step");
    }
    return apply_L(z, p, u.dx(p), u.dy(p));
  }
  const double h = *fd_step;
  if (!(h > 0)) throw Error(ErrorCode::InvalidArgument, "fd_step must be positive");
  const double reach = (fd_order == 4 ? 2.0 : 1.0) * h;
  for (const Point q : {Point{p.x + reach, p.y}, Point{p.x - reach, p.y}, Point{p.x, p.y + reach},
                        Point{p.x, p.y - reach}}) {
    if (!z.in_domain(q)) {
      throw Error(ErrorCode::OutOfDomain, "insufficient margin for the finite-difference stencil");
    }
  }
  const auto [dx, dy] = central_partials(u.value, p, h, fd_order);
  return apply_L(z, p, dx, dy);
}

}  // namespace hypocauchy
