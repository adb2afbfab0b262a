#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypocauchy/polyalg.hpp"
#include "hypocauchy/structures.hpp"

namespace hypocauchy {

enum class PointKind { Elliptic, Characteristic };

struct CharClassification {
  PointKind kind = PointKind::Elliptic;
  /// Transversal order of Im Z in the y direction; empty when not computable.
  std::optional<int> order;
  /// True when the decision was made in exact rational arithmetic.
  bool exact = false;
};

/// Elliptic vs characteristic, with the transversal order when available.
CharClassification classify_point(const FirstIntegral& z, Point p);

enum class CurveKind { Line, Graph, Circle };

/// Zero set of one recognised factor of P.
struct Curve {
  CurveKind kind = CurveKind::Line;
  std::size_t factor_index = 0;
  BivariatePolynomial implicit;  // base factor, vanishing exactly on the curve
  // Line: a x + b y + c = 0.
  Rational a, b, c;
  // Graph: y = g(x).
  std::vector<Rational> graph;
  // Circle: (x - cx)^2 + (y - cy)^2 = r2.
  Rational cx, cy, r2;

  std::string describe() const;
};

struct StratumPoint {
  Point point;
  RationalPoint exact_point;
  /// Coordinates are exact rationals on which P vanishes exactly.
  bool exact = false;
  int order = 0;
};

struct RegularComponent {
  std::size_t curve_index = 0;
  std::size_t factor_index = 0;
  CurveKind kind = CurveKind::Line;
  std::string description;
  /// Parameter range of the arc (x for graphs and non-vertical lines, y for vertical
  /// lines, angle for circles; a circle with no breakpoints spans [0, 2 pi]).
  double param_lo = 0.0;
  double param_hi = 0.0;
  bool closed = false;
  Point sample;
  int order = 0;
  bool order_exact = false;
  /// The arc has points where its tangent is parallel to the y axis; orders there differ.
  bool vertical_tangent = false;
  std::optional<int> stated_order;
  bool discrepancy = false;
};

struct SigmaDecomposition {
  std::vector<StratumPoint> isolated_points;  // Sigma^0
  std::vector<StratumPoint> singular_points;  // S
  std::vector<RegularComponent> regular_components;
  std::vector<Curve> curves;
  BivariatePolynomial p;
  BivariatePolynomial q;
};

/// Stratification of P^{-1}(0) for P given as a product of recognisable factors
/// (lines, graphs y = g(x), circles, single points). `stated_orders` maps a factor index
/// to an externally asserted order along its curve; disagreements are flagged.
SigmaDecomposition decompose_example(const FactoredPolynomial& p, const Region& region,
                                     const std::map<std::size_t, int>& stated_orders = {});

/// Points spread along a component, exact rationals whenever the curve allows it.
std::vector<std::pair<RationalPoint, bool>> component_sample_points(const SigmaDecomposition& d,
                                                                    const RegularComponent& c,
                                                                    int n);

/// Exact y-direction order of Q at a rational point (the type of L there).
int order_at(const BivariatePolynomial& q, const RationalPoint& p);

}  // namespace hypocauchy
