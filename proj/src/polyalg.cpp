#include "hypocauchy/polyalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "hypocauchy/error.hpp"

namespace hypocauchy {

RationalPoint to_rational(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
  }
  return {Rational(x), Rational(y)};
}

BivariatePolynomial::BivariatePolynomial(const Rational& constant) { add_term(0, 0, constant); }

BivariatePolynomial BivariatePolynomial::monomial(int i, int j, const Rational& coeff) {
  if (i < 0 || j < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent");
  BivariatePolynomial p;
  p.add_term(i, j, coeff);
  return p;
}

BivariatePolynomial BivariatePolynomial::from_terms(std::span<const Term> terms) {
  BivariatePolynomial p;
  for (const auto& t : terms) {
    if (t.i < 0 || t.j < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent");
    p.add_term(t.i, t.j, t.coeff);
  }
  return p;
}

void BivariatePolynomial::add_term(int i, int j, const Rational& c) {
  if (c == 0) return;
  Rational v(c);
  v.canonicalize();  // user-built fractions may carry common factors
  auto [it, inserted] = terms_.try_emplace({i, j}, std::move(v));
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int BivariatePolynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

int BivariatePolynomial::degree_x() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first);
  return d;
}

int BivariatePolynomial::degree_y() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.second);
  return d;
}

Rational BivariatePolynomial::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? Rational(0) : it->second;
}

namespace {

std::vector<Rational> powers(const Rational& v, int n) {
  std::vector<Rational> out(static_cast<std::size_t>(std::max(n, 0) + 1));
  out[0] = 1;
  for (std::size_t k = 1; k < out.size(); ++k) out[k] = out[k - 1] * v;
  return out;
}

// Binomial coefficients C(n, k) for n <= nmax.
std::vector<std::vector<mpz_class>> binomials(int nmax) {
  std::vector<std::vector<mpz_class>> c(static_cast<std::size_t>(nmax + 1));
  for (int n = 0; n <= nmax; ++n) {
    c[n].assign(static_cast<std::size_t>(n + 1), 1);
    for (int k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
  }
  return c;
}

}  // namespace

Rational BivariatePolynomial::eval(const Rational& x, const Rational& y) const {
  const auto xp = powers(x, degree_x());
  const auto yp = powers(y, degree_y());
  Rational sum = 0;
  for (const auto& [e, c] : terms_) sum += c * xp[e.first] * yp[e.second];
  return sum;
}

BivariatePolynomial BivariatePolynomial::d_dx() const {
  BivariatePolynomial out;
  for (const auto& [e, c] : terms_) {
    if (e.first > 0) out.add_term(e.first - 1, e.second, c * e.first);
  }
  return out;
}

BivariatePolynomial BivariatePolynomial::d_dy() const {
  BivariatePolynomial out;
  for (const auto& [e, c] : terms_) {
    if (e.second > 0) out.add_term(e.first, e.second - 1, c * e.second);
  }
  return out;
}

BivariatePolynomial BivariatePolynomial::shifted(const Rational& x0, const Rational& y0) const {
  const int dx = degree_x();
  const int dy = degree_y();
  if (dx < 0) return {};
  const auto binom = binomials(std::max(dx, dy));
  const auto xp = powers(x0, dx);
  const auto yp = powers(y0, dy);
  BivariatePolynomial out;
  // (x + x0)^i (y + y0)^j = sum_a sum_b C(i,a) C(j,b) x^a y^b x0^(i-a) y0^(j-b)
  for (const auto& [e, c] : terms_) {
    const auto [i, j] = e;
    for (int a = 0; a <= i; ++a) {
      if (a < i && x0 == 0) continue;
      const Rational ca = c * Rational(binom[i][a]) * xp[i - a];
      for (int b = 0; b <= j; ++b) {
        if (b < j && y0 == 0) continue;
        out.add_term(a, b, ca * Rational(binom[j][b]) * yp[j - b]);
      }
    }
  }
  return out;
}

BivariatePolynomial BivariatePolynomial::pow(unsigned n) const {
  BivariatePolynomial result(Rational(1));
  BivariatePolynomial base = *this;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return result;
}

BivariatePolynomial BivariatePolynomial::scaled(const Rational& c) const {
  BivariatePolynomial out;
  for (const auto& [e, v] : terms_) out.add_term(e.first, e.second, v * c);
  return out;
}

BivariatePolynomial& BivariatePolynomial::operator+=(const BivariatePolynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, c);
  return *this;
}

BivariatePolynomial& BivariatePolynomial::operator-=(const BivariatePolynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, -c);
  return *this;
}

BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b) {
  BivariatePolynomial out;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      out.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
    }
  }
  return out;
}

std::string BivariatePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    const Rational mag = abs(c);
    const bool unit = (mag == 1) && (e.first + e.second > 0);
    if (!unit) os << mag.get_str();
    if (e.first > 0) os << (unit ? "" : "*") << "x" << (e.first > 1 ? "^" + std::to_string(e.first) : "");
    if (e.second > 0) {
      os << ((unit && e.first == 0) ? "" : "*") << "y"
         << (e.second > 1 ? "^" + std::to_string(e.second) : "");
    }
  }
  return os.str();
}

BivariatePolynomial poly_mul(const BivariatePolynomial& a, const BivariatePolynomial& b) {
  return a * b;
}

BivariatePolynomial antiderivative_y(const BivariatePolynomial& p) {
  std::vector<Term> terms;
  terms.reserve(p.terms().size());
  for (const auto& [e, c] : p.terms()) {
    terms.push_back({e.first, e.second + 1, c / (e.second + 1)});
  }
  return BivariatePolynomial::from_terms(terms);
}

std::vector<Rational> restrict_to_line(const BivariatePolynomial& p, const RationalPoint& at,
                                       Axis direction) {
  const bool along_y = direction == Axis::Y;
  const int n = along_y ? p.degree_y() : p.degree_x();
  if (n < 0) return {};
  const auto binom = binomials(n);
  const auto xp = powers(at.x, p.degree_x());
  const auto yp = powers(at.y, p.degree_y());
  std::vector<Rational> out(static_cast<std::size_t>(n + 1), Rational(0));
  for (const auto& [e, c] : p.terms()) {
    const auto [i, j] = e;
    const int along = along_y ? j : i;
    const Rational fixed = along_y ? xp[i] : yp[j];
    const auto& moving = along_y ? yp : xp;
    for (int m = 0; m <= along; ++m) {
      out[m] += c * fixed * Rational(binom[along][m]) * moving[along - m];
    }
  }
  return out;
}

VanishingOrder vanishing_order(const BivariatePolynomial& p, const RationalPoint& at,
                               Axis direction) {
  const auto c = restrict_to_line(p, at, direction);
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (c[m] != 0) return {static_cast<int>(m), false};
  }
  return VanishingOrder::inf();
}

VanishingOrder transversal_order(const BivariatePolynomial& p, const RationalPoint& at,
                                 Axis direction) {
  const auto c = restrict_to_line(p, at, direction);
  for (std::size_t m = 1; m < c.size(); ++m) {
    if (c[m] != 0) return {static_cast<int>(m), false};
  }
  return VanishingOrder::inf();
}

BivariatePolynomial FactoredPolynomial::expand() const {
  BivariatePolynomial out(Rational(1));
  for (const auto& f : factors) out = out * f.base.pow(f.power);
  return out;
}

PolyEvaluator::PolyEvaluator(const BivariatePolynomial& p) {
  const int dy = p.degree_y();
  if (dy < 0) return;
  rows_.resize(static_cast<std::size_t>(dy + 1));
  for (const auto& [e, c] : p.terms()) {
    auto& row = rows_[e.second];
    if (row.size() <= static_cast<std::size_t>(e.first)) row.resize(e.first + 1, 0.0);
    row[e.first] = c.get_d();
  }
}

double compensated_horner(std::span<const double> coeffs, double x) {
  if (coeffs.empty()) return 0.0;
  double s = coeffs.back();
  double c = 0.0;
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
    const double p = s * x;
    const double pi = std::fma(s, x, -p);
    const double t = p + coeffs[k];
    const double bb = t - p;
    const double sigma = (p - (t - bb)) + (coeffs[k] - bb);
    s = t;
    c = std::fma(c, x, pi + sigma);
  }
  return s + c;
}

double PolyEvaluator::operator()(double x, double y) const {
  if (rows_.empty()) return 0.0;
  constexpr std::size_t kStack = 64;
  if (rows_.size() <= kStack) {
    std::array<double, kStack> ycoef{};
    for (std::size_t j = 0; j < rows_.size(); ++j) ycoef[j] = compensated_horner(rows_[j], x);
    return compensated_horner(std::span<const double>(ycoef.data(), rows_.size()), y);
  }
  std::vector<double> ycoef(rows_.size());
  for (std::size_t j = 0; j < rows_.size(); ++j) ycoef[j] = compensated_horner(rows_[j], x);
  return compensated_horner(ycoef, y);
}

}  // namespace hypocauchy
