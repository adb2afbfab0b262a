#pragma once

#include <initializer_list>
#include <tuple>

#include "hypocauchy/polyalg.hpp"

namespace testsupport {

using hypocauchy::BivariatePolynomial;
using hypocauchy::FactoredPolynomial;
using hypocauchy::Rational;
using hypocauchy::Term;

inline BivariatePolynomial poly(std::initializer_list<std::tuple<int, int, long>> terms) {
  std::vector<Term> t;
  for (const auto& [i, j, c] : terms) t.push_back({i, j, Rational(c)});
  return BivariatePolynomial::from_terms(t);
}

// y^2 (x^2+y^2) (y-1+x^2)^6 (x^2+(y+1)^2) (x^2+(y-3)^2-1)^2, the reference structure
// with lines, parabola, circle and isolated/singular points.
inline FactoredPolynomial stratified_factors() {
  FactoredPolynomial f;
  f.factors.push_back({poly({{0, 2, 1}}), 1});
  f.factors.push_back({poly({{2, 0, 1}, {0, 2, 1}}), 1});
  f.factors.push_back({poly({{0, 1, 1}, {0, 0, -1}, {2, 0, 1}}), 6});
  f.factors.push_back({poly({{2, 0, 1}, {0, 2, 1}, {0, 1, 2}, {0, 0, 1}}), 1});
  f.factors.push_back({poly({{2, 0, 1}, {0, 2, 1}, {0, 1, -6}, {0, 0, 8}}), 2});
  return f;
}

}  // namespace testsupport
