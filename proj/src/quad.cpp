#include "hypocauchy/quad.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <utility>

#include "hypocauchy/error.hpp"

namespace hypocauchy {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Kronrod 7-point extension of the 3-point Gauss rule on [-1, 1]; Gauss nodes are 1, 3, 5.
constexpr std::array<double, 7> kX7 = {-0.960491268708020283423507092629080, -0.774596669241483377035853079956480,
                                       -0.434243749346802558002071502844628, 0.0,
                                       0.434243749346802558002071502844628,  0.774596669241483377035853079956480,
                                       0.960491268708020283423507092629080};
constexpr std::array<double, 7> kWK7 = {0.104656226026467265193823857192073, 0.268488089868333440728569280666710,
                                        0.401397414775962222905051818618432, 0.450916538658474142345110087045571,
                                        0.401397414775962222905051818618432, 0.268488089868333440728569280666710,
                                        0.104656226026467265193823857192073};
constexpr std::array<double, 7> kWG3 = {0.0, 5.0 / 9.0, 0.0, 8.0 / 9.0, 0.0, 5.0 / 9.0, 0.0};

// Gauss-Kronrod 7/15 (abscissae from the right half, centre last).
constexpr std::array<double, 8> kX15 = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWK15 = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                         0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                         0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                         0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWG7 = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Neumaier summation for complex values.
struct CompensatedSum {
  Complex sum{0.0, 0.0};
  Complex carry{0.0, 0.0};

  void add(Complex x) {
    sum_part(sum.real(), carry, x.real(), true);
    sum_part(sum.imag(), carry, x.imag(), false);
  }
  Complex value() const { return sum + carry; }

 private:
  void sum_part(double s, Complex& c, double x, bool re) {
    const double t = s + x;
    const double d = std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    if (re) {
      sum.real(t);
      c.real(c.real() + d);
    } else {
      sum.imag(t);
      c.imag(c.imag() + d);
    }
  }
};

// ------------------------------------------------------------------ geometry

// Piecewise map from parameter to physical coordinate along one axis. Knots are fixed
// points; a segment next to a singular line is graded as x = a + L u^m.
struct AxisMap {
  std::vector<double> knots;
  std::vector<int> grade;  // +1: singular at left knot, -1: at right knot, 0: linear
  int m = 1;

  std::size_t segments() const { return grade.size(); }

  // (x, dx/dp) for parameter p inside segment `seg`.
  std::pair<double, double> map(double p, std::size_t seg) const {
    const double a = knots[seg];
    const double b = knots[seg + 1];
    const double len = b - a;
    switch (grade[seg]) {
      case 1: {
        const double u = (p - a) / len;
        const double um1 = std::pow(u, m - 1);
        return {a + len * um1 * u, m * um1};
      }
      case -1: {
        const double u = (b - p) / len;
        const double um1 = std::pow(u, m - 1);
        return {b - len * um1 * u, m * um1};
      }
      default:
        return {p, 1.0};
    }
  }
};

AxisMap build_axis(double lo, double hi, std::vector<double> points, const std::vector<double>& lines,
                   int m) {
  AxisMap ax;
  ax.m = m;
  const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  const double tol = 1e-14 * scale;
  points.push_back(lo);
  points.push_back(hi);
  for (double l : lines) points.push_back(l);
  std::vector<double> knots;
  for (double p : points) {
    if (p >= lo - tol && p <= hi + tol) knots.push_back(std::clamp(p, lo, hi));
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(), [&](double a, double b) { return b - a <= tol; }),
              knots.end());
  auto is_line = [&](double x) {
    return std::any_of(lines.begin(), lines.end(), [&](double l) { return std::abs(l - x) <= tol; });
  };
  // Segments touching a singular line get a midpoint knot: graded halves then never end at
  // another knot, where x = a + L u^m would be resolved only through u -> 1.
  std::vector<double> refined{knots.front()};
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    if (m > 1 && (is_line(knots[k]) || is_line(knots[k + 1]))) refined.push_back(0.5 * (knots[k] + knots[k + 1]));
    refined.push_back(knots[k + 1]);
  }
  ax.knots = refined;
  for (std::size_t k = 0; k + 1 < refined.size(); ++k) {
    int g = 0;
    if (m > 1 && is_line(refined[k])) g = 1;
    if (m > 1 && is_line(refined[k + 1])) g = -1;
    ax.grade.push_back(g);
  }
  return ax;
}

struct Cell {
  double u0, u1, v0, v1;
  std::size_t su = 0, sv = 0;  // axis segments (rectangles)
  int du = 0, dv = 0;          // subdivision depth per axis since the cell's origin
  int chain = -1;              // shell tag: chain id and level
  int level = -1;
  Complex value{0.0, 0.0};
  double err = 0.0, err_u = 0.0, err_v = 0.0;
  bool leaf = true;
  bool frozen = false;
};

enum class FeatureKind { Corner, Edge };

struct Feature {
  FeatureKind kind;
  double u, v;  // parameter corner (Corner), or u = 0 for the polar centre edge
  Point physical;
};

struct Chain {
  FeatureKind kind;
  double cu, cv;
  Point physical;
  Cell inner;
  int levels = 0;
};

class Engine {
 public:
  Engine(const Integrand& f, const Region& region, const QuadratureSpec& spec)
      : f_(f), region_(region), spec_(spec), disc_(!region.is_rectangle()) {}

  IntegralResult run();

 private:
  Point physical(double u, double v, const Cell& c, double& jac) const {
    if (disc_) {
      jac = u;
      const Point o = region_.center();
      return {o.x + u * std::cos(v), o.y + u * std::sin(v)};
    }
    const auto [x, dx] = ax_.map(u, c.su);
    const auto [y, dy] = ay_.map(v, c.sv);
    jac = dx * dy;
    return {x, y};
  }

  bool on_singular_line(Point p) const {
    for (const auto& l : spec_.singular_lines) {
      if ((l.vertical ? p.x : p.y) == l.position) return true;
    }
    return false;
  }

  void evaluate(Cell& c) {
    const double hu = 0.5 * (c.u1 - c.u0), mu = 0.5 * (c.u1 + c.u0);
    const double hv = 0.5 * (c.v1 - c.v0), mv = 0.5 * (c.v1 + c.v0);
    std::array<std::array<Complex, 7>, 7> vals;
    for (int i = 0; i < 7; ++i) {
      const double u = mu + hu * kX7[i];
      for (int j = 0; j < 7; ++j) {
        const double v = mv + hv * kX7[j];
        double jac = 0.0;
        const Point p = physical(u, v, c, jac);
        // Graded maps flatten onto a singular line faster than any admissible blow-up; a
        // node that rounds onto the line carries a vanishing weight.
        if (jac == 0.0 || on_singular_line(p)) {
          vals[i][j] = 0.0;
          continue;
        }
        vals[i][j] = f_(p) * jac;
      }
    }
    Complex kk = 0, kg = 0, gk = 0, gg = 0;
    for (int i = 0; i < 7; ++i) {
      Complex rk = 0, rg = 0;
      for (int j = 0; j < 7; ++j) {
        rk += kWK7[j] * vals[i][j];
        rg += kWG3[j] * vals[i][j];
      }
      kk += kWK7[i] * rk;
      kg += kWK7[i] * rg;
      gk += kWG3[i] * rk;
      gg += kWG3[i] * rg;
    }
    const double area = hu * hv;
    c.value = kk * area;
    c.err_u = std::abs(kk - gk) * area;
    c.err_v = std::abs(kk - kg) * area;
    c.err = std::max(std::abs(kk - gg) * area, c.err_u + c.err_v);
    if (!std::isfinite(c.err) || !std::isfinite(std::abs(c.value))) {
      throw Error(ErrorCode::InvalidArgument, "integrand not finite on the region");
    }
    ++evaluations_;
  }

  std::vector<Feature> features_of(const Cell& c) const;
  void build_initial();
  void build_chain(Cell c, const Feature& f);
  std::size_t add_cell(Cell c) {
    cells_.push_back(c);
    return cells_.size() - 1;
  }
  std::vector<Cell> split(const Cell& c) const;
  void refine_global();
  // Relative accuracy of the levels feeding the tail extrapolation.
  double level_rel_tol() const { return std::clamp(spec_.rel_tol, 1e-10, 1e-4); }
  void refine_levels();
  Complex extrapolate(const Chain& ch, double& err, bool& diverging) const;

  const Integrand& f_;
  Region region_;
  const QuadratureSpec& spec_;
  bool disc_;
  AxisMap ax_, ay_;
  std::vector<Feature> features_;
  std::vector<Cell> cells_;
  std::vector<Chain> chains_;
  std::size_t evaluations_ = 0;
  bool budget_hit_ = false;
};

std::vector<Feature> Engine::features_of(const Cell& c) const {
  std::vector<Feature> out;
  for (const auto& f : features_) {
    if (f.kind == FeatureKind::Edge) {
      if (c.u0 == 0.0) out.push_back(f);
      continue;
    }
    const bool cu = f.u == c.u0 || f.u == c.u1;
    const bool cv = f.v == c.v0 || f.v == c.v1;
    if (cu && cv) out.push_back(f);
  }
  return out;
}

void Engine::build_initial() {
  std::vector<double> px, py;
  if (disc_) {
    std::vector<double> rk{0.0, region_.radius()}, tk{0.0, 0.5 * std::numbers::pi, std::numbers::pi,
                                                       1.5 * std::numbers::pi, kTwoPi};
    const double tol = 1e-14 * region_.radius();
    for (const auto& p : spec_.singular_points) {
      const double r = distance(p, region_.center());
      if (r > region_.radius() + tol) continue;
      if (r <= tol) {
        features_.push_back({FeatureKind::Edge, 0.0, 0.0, region_.center()});
        continue;
      }
      double th = std::atan2(p.y - region_.center().y, p.x - region_.center().x);
      if (th < 0) th += kTwoPi;
      const double rr = std::min(r, region_.radius());
      rk.push_back(rr);
      tk.push_back(th);
      features_.push_back({FeatureKind::Corner, rr, th, p});
      if (th < 1e-15) features_.push_back({FeatureKind::Corner, rr, kTwoPi, p});
    }
    for (auto* k : {&rk, &tk}) {
      std::sort(k->begin(), k->end());
      k->erase(std::unique(k->begin(), k->end()), k->end());
    }
    for (std::size_t i = 0; i + 1 < rk.size(); ++i)
      for (std::size_t j = 0; j + 1 < tk.size(); ++j) {
        Cell c{rk[i], rk[i + 1], tk[j], tk[j + 1]};
        cells_.push_back(c);
      }
  } else {
    const double tol = 1e-14 * std::max(1.0, region_.diameter());
    std::vector<double> lx, ly;
    for (const auto& l : spec_.singular_lines) (l.vertical ? lx : ly).push_back(l.position);
    for (const auto& p : spec_.singular_points) {
      if (!region_.contains(p, tol)) continue;
      px.push_back(p.x);
      py.push_back(p.y);
    }
    px.insert(px.end(), spec_.breakpoints_x.begin(), spec_.breakpoints_x.end());
    py.insert(py.end(), spec_.breakpoints_y.begin(), spec_.breakpoints_y.end());
    const int m = spec_.singular_lines.empty() ? 1 : spec_.line_grading;
    ax_ = build_axis(region_.x_lo(), region_.x_hi(), px, lx, m);
    ay_ = build_axis(region_.y_lo(), region_.y_hi(), py, ly, m);
    auto snap = [](const AxisMap& a, double x) {
      double best = a.knots.front();
      for (double k : a.knots)
        if (std::abs(k - x) < std::abs(best - x)) best = k;
      return best;
    };
    for (const auto& p : spec_.singular_points) {
      if (!region_.contains(p, tol)) continue;
      features_.push_back({FeatureKind::Corner, snap(ax_, p.x), snap(ay_, p.y), p});
    }
    for (std::size_t i = 0; i < ax_.segments(); ++i)
      for (std::size_t j = 0; j < ay_.segments(); ++j) {
        Cell c{ax_.knots[i], ax_.knots[i + 1], ay_.knots[j], ay_.knots[j + 1]};
        c.su = i;
        c.sv = j;
        cells_.push_back(c);
      }
  }

  // Separate cells touching several singular features, then start chains.
  std::vector<Cell> pending = std::move(cells_);
  cells_.clear();
  while (!pending.empty()) {
    Cell c = pending.back();
    pending.pop_back();
    const auto feats = features_of(c);
    if (feats.size() > 1) {
      Cell a = c, b = c;
      const bool split_u = std::any_of(feats.begin(), feats.end(), [&](const Feature& f) {
        return f.kind == FeatureKind::Edge || f.u != feats.front().u;
      });
      if (split_u) {
        a.u1 = b.u0 = 0.5 * (c.u0 + c.u1);
      } else {
        a.v1 = b.v0 = 0.5 * (c.v0 + c.v1);
      }
      pending.push_back(a);
      pending.push_back(b);
      continue;
    }
    if (feats.size() == 1) {
      build_chain(c, feats.front());
    } else {
      evaluate(c);
      add_cell(c);
    }
  }
}

void Engine::build_chain(Cell c, const Feature& f) {
  Chain ch{f.kind, f.u, f.v, f.physical, {}, 0};
  const int id = static_cast<int>(chains_.size());
  auto extent = [&](const Cell& x) {
    double jac = 0.0, d = 0.0;
    for (double u : {x.u0, x.u1})
      for (double v : {x.v0, x.v1}) d = std::max(d, distance(physical(u, v, x, jac), f.physical));
    return d;
  };
  const int min_levels = spec_.tail_extrapolation ? 6 : 1;
  int level = 0;
  while ((extent(c) > spec_.exclusion_radius_floor || level < min_levels) && level < 400) {
    ++level;
    const double um = 0.5 * (c.u0 + c.u1);
    std::vector<Cell> kids;
    if (f.kind == FeatureKind::Edge) {
      Cell in = c, out = c;
      in.u1 = out.u0 = um;
      kids = {out};
      c = in;
    } else {
      const double vm = 0.5 * (c.v0 + c.v1);
      std::array<Cell, 4> q{c, c, c, c};
      q[0].u1 = um; q[0].v1 = vm;
      q[1].u0 = um; q[1].v1 = vm;
      q[2].u1 = um; q[2].v0 = vm;
      q[3].u0 = um; q[3].v0 = vm;
      for (auto& k : q) {
        const bool corner = (k.u0 == f.u || k.u1 == f.u) && (k.v0 == f.v || k.v1 == f.v);
        if (corner) {
          c = k;
        } else {
          kids.push_back(k);
        }
      }
    }
    for (auto& k : kids) {
      k.du = k.dv = 0;
      k.chain = id;
      k.level = level;
      evaluate(k);
      add_cell(k);
    }
  }
  evaluate(c);
  ch.inner = c;
  ch.levels = level;
  chains_.push_back(ch);
}

std::vector<Cell> Engine::split(const Cell& c) const {
  // Split along the axes carrying the error; an exhausted axis freezes the cell rather
  // than refining the direction that does not need it.
  const bool su = c.err_u >= 0.1 * c.err_v && c.du < spec_.max_depth;
  const bool sv = c.err_v >= 0.1 * c.err_u && c.dv < spec_.max_depth;
  std::vector<Cell> out;
  if (!su && !sv) return out;
  const double um = 0.5 * (c.u0 + c.u1), vm = 0.5 * (c.v0 + c.v1);
  Cell base = c;
  base.leaf = true;
  if (su && sv) {
    std::array<Cell, 4> q{base, base, base, base};
    q[0].u1 = um; q[0].v1 = vm;
    q[1].u0 = um; q[1].v1 = vm;
    q[2].u1 = um; q[2].v0 = vm;
    q[3].u0 = um; q[3].v0 = vm;
    for (auto& k : q) {
      ++k.du;
      ++k.dv;
      out.push_back(k);
    }
  } else if (su) {
    Cell a = base, b = base;
    a.u1 = b.u0 = um;
    ++a.du;
    ++b.du;
    out = {a, b};
  } else {
    Cell a = base, b = base;
    a.v1 = b.v0 = vm;
    ++a.dv;
    ++b.dv;
    out = {a, b};
  }
  return out;
}

struct HeapEntry {
  double err;
  std::size_t id;
  bool operator<(const HeapEntry& o) const { return err != o.err ? err < o.err : id > o.id; }
};

void Engine::refine_global() {
  std::priority_queue<HeapEntry> heap;
  Complex total = 0;
  double total_err = 0;
  // Tolerances are relative to the integral of |f| (estimated by summed cell magnitudes),
  // so that integrands cancelling to zero still terminate.
  double magnitude = 0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    heap.push({cells_[i].err, i});
    total += cells_[i].value;
    total_err += cells_[i].err;
    magnitude += std::abs(cells_[i].value);
  }
  for (const auto& ch : chains_) {
    total += ch.inner.value;
    magnitude += std::abs(ch.inner.value);
  }
  std::size_t iter = 0;
  double frozen_err = 0;
  while (!heap.empty()) {
    // Half the budget; the other half is left for the extrapolated tails.
    const double tol = 0.5 * std::max(spec_.abs_tol, spec_.rel_tol * std::max(std::abs(total), magnitude));
    if (total_err - frozen_err <= tol) break;
    if (evaluations_ >= spec_.max_cells) {
      budget_hit_ = true;
      break;
    }
    const auto top = heap.top();
    heap.pop();
    Cell& c = cells_[top.id];
    auto kids = split(c);
    if (kids.empty()) {
      c.frozen = true;
      frozen_err += c.err;
      continue;
    }
    c.leaf = false;
    total -= c.value;
    total_err -= c.err;
    magnitude -= std::abs(c.value);
    for (auto& k : kids) {
      evaluate(k);
      total += k.value;
      total_err += k.err;
      magnitude += std::abs(k.value);
      const std::size_t id = add_cell(k);
      heap.push({cells_[id].err, id});
    }
    if (++iter % 1024 == 0) {
      // Resynchronise the running sums.
      CompensatedSum s;
      double e = 0, fe = 0, m = 0;
      for (const auto& x : cells_)
        if (x.leaf) {
          s.add(x.value);
          e += x.err;
          m += std::abs(x.value);
          if (x.frozen) fe += x.err;
        }
      frozen_err = fe;
      for (const auto& ch : chains_) {
        s.add(ch.inner.value);
        m += std::abs(ch.inner.value);
      }
      total = s.value();
      total_err = e;
      magnitude = m;
    }
  }
}

void Engine::refine_levels() {
  // Every annulus is resolved relative to its own size: thin ridges invisible to the rule
  // pair at the global tolerance would otherwise drop whole levels.
  const double level_rel = level_rel_tol();
  for (std::size_t id = 0; id < chains_.size(); ++id) {
    const int levels = chains_[id].levels;
    for (int lv = 1; lv <= levels; ++lv) {
      std::priority_queue<HeapEntry> heap;
      double sum = 0;  // magnitude of the level
      double err = 0;
      for (std::size_t i = 0; i < cells_.size(); ++i) {
        const Cell& c = cells_[i];
        if (c.leaf && c.chain == static_cast<int>(id) && c.level == lv) {
          heap.push({c.err, i});
          sum += std::abs(c.value);
          err += c.err;
        }
      }
      double frozen_err = 0;
      for (std::size_t i = 0; i < cells_.size(); ++i) {
        const Cell& c = cells_[i];
        if (c.leaf && c.frozen && c.chain == static_cast<int>(id) && c.level == lv) frozen_err += c.err;
      }
      while (!heap.empty() && err - frozen_err > level_rel * sum + 1e-3 * spec_.abs_tol) {
        if (evaluations_ >= spec_.max_cells) {
          budget_hit_ = true;
          return;
        }
        const auto top = heap.top();
        heap.pop();
        Cell& c = cells_[top.id];
        if (c.frozen) continue;
        auto kids = split(c);
        if (kids.empty()) {
          c.frozen = true;
          frozen_err += c.err;
          continue;
        }
        c.leaf = false;
        sum -= std::abs(c.value);
        err -= c.err;
        for (auto& k : kids) {
          evaluate(k);
          sum += std::abs(k.value);
          err += k.err;
          const std::size_t nid = add_cell(k);
          heap.push({cells_[nid].err, nid});
        }
      }
    }
  }
}

// Sum of the contributions of all levels beyond the last resolved one.
Complex Engine::extrapolate(const Chain& ch, double& err, bool& diverging) const {
  const int id = static_cast<int>(&ch - chains_.data());
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(ch.levels + 1));
  for (const auto& c : cells_) {
    if (c.leaf && c.chain == id) acc[static_cast<std::size_t>(c.level)].add(c.value);
  }
  std::vector<Complex> s;
  for (int lv = 1; lv <= ch.levels; ++lv) s.push_back(acc[static_cast<std::size_t>(lv)].value());
  const std::size_t n = s.size();
  double scale = 0;
  for (const auto& x : s) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) {
    err = 0;
    return 0;
  }
  const Complex last = s[n - 1];
  const Complex prev = s[n - 2];
  if (std::abs(last) <= 1e-300 || std::abs(prev) <= 1e-300) {
    err = std::abs(ch.inner.value);
    return ch.inner.value;
  }
  // Non-decaying contributions: the integral does not exist at this point.
  const Complex r1 = last / prev;
  const Complex r0 = prev / s[n - 3];
  if (std::abs(r1) >= 1.0 && std::abs(r0) >= 1.0) {
    diverging = true;
    err = std::abs(ch.inner.value) + std::abs(last) * static_cast<double>(n);
    return ch.inner.value;
  }

  // One-term fallback: geometric tail with ratio r1.
  auto one_term = [&](double& e) {
    const Complex tail = last * r1 / (1.0 - r1);
    e = std::abs(r1 - r0) / std::max(1e-300, std::abs(1.0 - r1)) * std::abs(tail) + level_rel_tol() * std::abs(tail);
    return tail;
  };

  // Two-term Prony fit x_{k+2} = a x_{k+1} + b x_k.
  auto fit = [](const Complex* x, Complex& a, Complex& b) {
    const Complex det = x[1] * x[1] - x[0] * x[2];
    const double sc = std::norm(x[1]) + std::abs(x[0] * x[2]);
    if (std::abs(det) <= 1e-10 * sc) return false;
    a = (x[2] * x[1] - x[3] * x[0]) / det;
    b = (x[3] * x[1] - x[2] * x[2]) / det;
    return true;
  };
  if (n >= 5) {
    Complex a, b, a2, b2;
    if (fit(&s[n - 5], a, b) && fit(&s[n - 4], a2, b2)) {
      const Complex predicted = a * s[n - 2] + b * s[n - 3];
      const Complex disc = std::sqrt(a2 * a2 + 4.0 * b2);
      const Complex l1 = 0.5 * (a2 + disc), l2 = 0.5 * (a2 - disc);
      if (std::abs(l1) < 1.0 && std::abs(l2) < 1.0 && std::abs(l1 - l2) > 1e-6 * std::abs(l1)) {
        // x_k = A l1^k + B l2^k with k = 0 at the second-to-last level.
        const Complex x0 = s[n - 2], x1 = s[n - 1];
        const Complex amp_b = (x1 - l1 * x0) / (l2 - l1);
        const Complex amp_a = x0 - amp_b;
        const Complex tail = amp_a * l1 * l1 / (1.0 - l1) + amp_b * l2 * l2 / (1.0 - l2);
        const double rel = std::abs(predicted - last) / std::abs(last);
        err = rel * std::abs(tail) + level_rel_tol() * std::abs(tail);
        double e1 = 0.0;
        const Complex t1 = one_term(e1);
        // A wild two-term fit is worse than the plain geometric tail.
        if (err < e1 || std::abs(tail - t1) < e1) return tail;
        err = e1;
        return t1;
      }
    }
  }
  return one_term(err);
}

IntegralResult Engine::run() {
  build_initial();
  refine_global();
  if (!chains_.empty()) refine_levels();

  IntegralResult out;
  CompensatedSum total;
  double err = 0, magnitude = 0;
  for (const auto& c : cells_) {
    if (!c.leaf) continue;
    total.add(c.value);
    err += c.err;
    magnitude += std::abs(c.value);
  }
  for (const auto& ch : chains_) {
    if (spec_.tail_extrapolation && ch.levels >= 3) {
      double e = 0;
      bool div = false;
      const Complex tail = extrapolate(ch, e, div);
      total.add(tail);
      magnitude += std::abs(tail);
      err += e;
      out.diverging = out.diverging || div;
    } else {
      // The rule value of a singular cell is not trustworthy beyond its size.
      total.add(ch.inner.value);
      magnitude += std::abs(ch.inner.value);
      err += std::abs(ch.inner.value) + ch.inner.err;
    }
  }
  out.value = total.value();
  out.error_estimate = err;
  out.cells_used = evaluations_;
  out.converged = !out.diverging && err <= std::max(spec_.abs_tol, spec_.rel_tol * std::max(std::abs(out.value), magnitude));
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  if (max_depth < 1) throw Error(ErrorCode::InvalidArgument, "max_depth must be at least 1");
  if (!(exclusion_radius_floor > 0)) throw Error(ErrorCode::InvalidArgument, "exclusion_radius_floor must be positive");
  if (max_cells < 1) throw Error(ErrorCode::InvalidArgument, "max_cells must be positive");
  if (line_grading < 1) throw Error(ErrorCode::InvalidArgument, "line_grading must be at least 1");
  for (const auto& p : singular_points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error(ErrorCode::InvalidArgument, "singular point not finite");
  }
}

IntegralResult integrate(const Integrand& f, const Region& region, const QuadratureSpec& spec) {
  spec.validate();
  if (!region.is_rectangle() &&
      (!spec.singular_lines.empty() || !spec.breakpoints_x.empty() || !spec.breakpoints_y.empty())) {
    throw Error(ErrorCode::InvalidArgument, "singular lines and breakpoints need a rectangular region");
  }
  Engine engine(f, region, spec);
  return engine.run();
}

// ------------------------------------------------------------------ 1D

namespace {
struct Interval {
  double a, b;
  Complex value;
  double err;
};

Interval gk15(const std::function<Complex(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const Complex fc = f(c);
  Complex k = kWK15[7] * fc;
  Complex g = kWG7[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const Complex s = f(c - h * kX15[i]) + f(c + h * kX15[i]);
    k += kWK15[i] * s;
    if (i % 2 == 1) g += kWG7[i / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}
}  // namespace

IntegralResult integrate_1d(const std::function<Complex(double)>& f, double a, double b, const Spec1D& spec) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::InvalidArgument, "1D interval must be finite and nonempty");
  }
  std::vector<double> knots{a, b};
  for (double p : spec.breakpoints)
    if (p > a && p < b) knots.push_back(p);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::vector<Interval> parts;
  auto cmp = [&](std::size_t x, std::size_t y) {
    return parts[x].err != parts[y].err ? parts[x].err < parts[y].err : x > y;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
  std::vector<bool> live;
  Complex total = 0;
  double err = 0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    parts.push_back(gk15(f, knots[k], knots[k + 1]));
    live.push_back(true);
    total += parts.back().value;
    err += parts.back().err;
    heap.push(parts.size() - 1);
  }
  bool exhausted = false;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (parts.size() >= spec.max_intervals) {
      exhausted = true;
      break;
    }
    const std::size_t top = heap.top();
    heap.pop();
    const Interval cur = parts[top];
    const double mid = 0.5 * (cur.a + cur.b);
    if (!(mid > cur.a && mid < cur.b)) {
      exhausted = true;
      break;
    }
    live[top] = false;
    total -= cur.value;
    err -= cur.err;
    for (const auto& piece : {gk15(f, cur.a, mid), gk15(f, mid, cur.b)}) {
      parts.push_back(piece);
      live.push_back(true);
      total += piece.value;
      err += piece.err;
      heap.push(parts.size() - 1);
    }
  }
  CompensatedSum s;
  double e = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!live[k]) continue;
    s.add(parts[k].value);
    e += parts[k].err;
  }
  IntegralResult out;
  out.value = s.value();
  out.error_estimate = e;
  out.cells_used = parts.size();
  out.converged = !exhausted || e <= std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
  return out;
}

// ------------------------------------------------------------------ quasi-homogeneous

namespace {

// Radius R(phi) of the image of the disc: r^2 cos^2 + (r sin)^(2 tau) = rho^2.
double boundary_radius(double tau, double rho, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  double hi = std::numeric_limits<double>::infinity();
  if (c > 0) hi = std::min(hi, rho / c);
  if (s > 0) hi = std::min(hi, std::pow(rho, 1.0 / tau) / s);
  auto g = [&](double r) { return r * r * c * c + std::pow(r * s, 2.0 * tau) - rho * rho; };
  if (g(hi) <= 0) return hi;
  std::uintmax_t iters = 200;
  const auto [lo, up] = boost::math::tools::toms748_solve(g, 0.0, hi, -rho * rho, g(hi),
                                                          boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (lo + up);
}

}  // namespace

IntegralResult integrate_quasihomogeneous_weighted(double tau, double q, double rho,
                                                   const std::function<double(double, double)>& g,
                                                   const QuadratureSpec& spec) {
  if (!(tau > 0 && tau <= 1)) throw Error(ErrorCode::InvalidArgument, "tau must lie in (0, 1]");
  if (!(q >= 0 && q < 1 + tau)) throw Error(ErrorCode::InvalidArgument, "q must lie in [0, 1 + tau)");
  if (!(rho > 0) || !std::isfinite(rho)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");
  spec.validate();
  const double a = 1.0 + tau - q;
  Spec1D outer;
  outer.rel_tol = spec.rel_tol;
  outer.abs_tol = spec.abs_tol;
  Spec1D inner;
  inner.rel_tol = 0.1 * spec.rel_tol;
  inner.abs_tol = 0.1 * spec.abs_tol;
  bool inner_ok = true;

  // After phi = w^(1/tau) the factor tau sin(phi)^(tau-1) dphi becomes (sin phi / phi)^(tau-1) dw.
  auto integrand = [&](double w) -> Complex {
    const double phi = std::pow(w, 1.0 / tau);
    const double sinc = phi > 0 ? std::sin(phi) / phi : 1.0;
    const double r_max = boundary_radius(tau, rho, phi);
    double radial = 0.0;
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    // Quadrants: theta = phi, pi - phi, pi + phi, 2 pi - phi.
    for (int quadrant = 0; quadrant < 4; ++quadrant) {
      const double cs = (quadrant == 0 || quadrant == 3) ? cphi : -cphi;
      const double sn = (quadrant <= 1) ? 1.0 : -1.0;
      // r = R v^(1/a) removes r^(tau - q) dr.
      auto h = [&](double v) -> Complex {
        const double r = r_max * std::pow(v, 1.0 / a);
        const double s = r * cs;
        const double t = sn * std::pow(r * sphi, tau);
        return g(s, t);
      };
      const auto res = integrate_1d(h, 0.0, 1.0, inner);
      inner_ok = inner_ok && res.converged;
      radial += res.value.real();
    }
    return std::pow(sinc, tau - 1.0) * std::pow(r_max, a) / a * radial;
  };
  auto res = integrate_1d(integrand, 0.0, std::pow(0.5 * std::numbers::pi, tau), outer);
  res.converged = res.converged && inner_ok;
  return res;
}

IntegralResult integrate_quasihomogeneous(double tau, double q, double rho, const QuadratureSpec& spec) {
  if (!(q > 1)) throw Error(ErrorCode::InvalidArgument, "q must exceed 1");
  if (!(tau > 0 && tau <= 1)) throw Error(ErrorCode::InvalidArgument, "tau must lie in (0, 1]");
  if (!(q < 1 + tau)) throw Error(ErrorCode::InvalidArgument, "q must be below 1 + tau");
  if (!(rho > 0) || !std::isfinite(rho)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");
  spec.validate();
  const double a = 1.0 + tau - q;
  Spec1D outer;
  outer.rel_tol = spec.rel_tol;
  outer.abs_tol = spec.abs_tol;
  auto integrand = [&](double w) -> Complex {
    const double phi = std::pow(w, 1.0 / tau);
    const double sinc = phi > 0 ? std::sin(phi) / phi : 1.0;
    return 4.0 * std::pow(sinc, tau - 1.0) * std::pow(boundary_radius(tau, rho, phi), a) / a;
  };
  return integrate_1d(integrand, 0.0, std::pow(0.5 * std::numbers::pi, tau), outer);
}

}  // namespace hypocauchy
