#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hypocauchy {

using Rational = mpq_class;

/// Exact point with rational coordinates. Every finite double converts exactly.
struct RationalPoint {
  Rational x;
  Rational y;
};

RationalPoint to_rational(double x, double y);

/// One (i, j, c) triple: c * x^i * y^j.
struct Term {
  int i = 0;
  int j = 0;
  Rational coeff;
};

/// Bivariate polynomial with arbitrary-precision rational coefficients.
///
/// Stored as a map (i, j) -> c with no zero coefficients, so equality of two
/// polynomials is equality of their maps.
class BivariatePolynomial {
 public:
  using Exponent = std::pair<int, int>;
  using TermMap = std::map<Exponent, Rational>;

  BivariatePolynomial() = default;
  explicit BivariatePolynomial(const Rational& constant);
  static BivariatePolynomial monomial(int i, int j, const Rational& coeff = 1);
  static BivariatePolynomial from_terms(std::span<const Term> terms);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  int degree_x() const;
  int degree_y() const;
  Rational coeff(int i, int j) const;

  Rational eval(const Rational& x, const Rational& y) const;
  Rational eval(const RationalPoint& p) const { return eval(p.x, p.y); }

  BivariatePolynomial d_dx() const;
  BivariatePolynomial d_dy() const;
  /// q(x, y) = p(x + x0, y + y0).
  BivariatePolynomial shifted(const Rational& x0, const Rational& y0) const;
  BivariatePolynomial pow(unsigned n) const;
  BivariatePolynomial scaled(const Rational& c) const;

  BivariatePolynomial& operator+=(const BivariatePolynomial& o);
  BivariatePolynomial& operator-=(const BivariatePolynomial& o);
  friend BivariatePolynomial operator+(BivariatePolynomial a, const BivariatePolynomial& b) {
    return a += b;
  }
  friend BivariatePolynomial operator-(BivariatePolynomial a, const BivariatePolynomial& b) {
    return a -= b;
  }
  friend BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b);
  friend bool operator==(const BivariatePolynomial& a, const BivariatePolynomial& b) {
    return a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  void add_term(int i, int j, const Rational& c);

  TermMap terms_;
};

BivariatePolynomial poly_mul(const BivariatePolynomial& a, const BivariatePolynomial& b);

/// Antiderivative in y normalised so that result(x, 0) == 0.
BivariatePolynomial antiderivative_y(const BivariatePolynomial& p);

enum class Axis { X, Y };

/// Vanishing order of a polynomial restricted to an axis-parallel line.
struct VanishingOrder {
  int value = 0;
  bool infinite = false;

  static VanishingOrder inf() { return {0, true}; }
  friend bool operator==(const VanishingOrder&, const VanishingOrder&) = default;
};

/// Coefficients c_m of t -> p(at + t * e_direction), lowest power first.
std::vector<Rational> restrict_to_line(const BivariatePolynomial& p, const RationalPoint& at,
                                       Axis direction);

/// Smallest m such that the m-th directional derivative at `at` is nonzero.
VanishingOrder vanishing_order(const BivariatePolynomial& p, const RationalPoint& at,
                               Axis direction = Axis::Y);

/// Order of p - p(at) along the line: the smallest m >= 1 with a nonzero derivative.
/// This is the transversal order used for first integrals.
VanishingOrder transversal_order(const BivariatePolynomial& p, const RationalPoint& at,
                                 Axis direction = Axis::Y);

/// Product of factors, each raised to a power. Mirrors factored config input.
struct FactoredPolynomial {
  struct Factor {
    BivariatePolynomial base;
    unsigned power = 1;
  };
  std::vector<Factor> factors;

  BivariatePolynomial expand() const;
};

/// Double-precision evaluator built once from the exact coefficients.
///
/// Horner per variable with compensated (error-free transformation) inner loops.
class PolyEvaluator {
 public:
  PolyEvaluator() = default;
  explicit PolyEvaluator(const BivariatePolynomial& p);

  double operator()(double x, double y) const;
  bool empty() const { return rows_.empty(); }

 private:
  // rows_[j] holds the x-coefficients of y^j, lowest power first.
  std::vector<std::vector<double>> rows_;
};

/// Compensated Horner evaluation of a univariate polynomial (lowest power first).
double compensated_horner(std::span<const double> coeffs, double x);

}  // namespace hypocauchy
