#include "config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hypocauchy/error.hpp"

namespace hypocauchy::cli {

namespace pt = boost::property_tree;

void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Config, where + ": " + what);
}

namespace {

std::string clean(std::string v) {
  boost::algorithm::trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  boost::algorithm::trim(v);
  return v;
}

double to_double(const std::string& where, const std::string& tok) {
  double v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) config_error(where, "not a number: '" + tok + "'");
  return v;
}

long to_long(const std::string& where, const std::string& tok) {
  long v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) config_error(where, "not an integer: '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, const char* seps) {
  std::vector<std::string> out;
  boost::algorithm::split(out, s, boost::algorithm::is_any_of(seps), boost::algorithm::token_compress_on);
  for (auto& t : out) boost::algorithm::trim(t);
  std::erase_if(out, [](const std::string& t) { return t.empty(); });
  return out;
}

std::vector<std::string> terms_of(const std::string& s) {
  std::vector<std::string> out;
  boost::algorithm::split(out, s, boost::algorithm::is_any_of(","));
  for (auto& t : out) boost::algorithm::trim(t);
  return out;
}

Rational to_rational_token(const std::string& where, const std::string& tok) {
  try {
    Rational r(tok);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    config_error(where, "not a rational: '" + tok + "'");
  }
}

// "i j c, i j c" with integer exponents and rational coefficients.
BivariatePolynomial parse_poly(const std::string& where, const std::string& s) {
  std::vector<Term> terms;
  for (const auto& t : terms_of(s)) {
    const auto tok = split(t, " \t");
    if (tok.size() != 3) config_error(where, "expected 'i j c' terms, got '" + t + "'");
    const long i = to_long(where, tok[0]), j = to_long(where, tok[1]);
    if (i < 0 || j < 0 || i > 64 || j > 64) config_error(where, "exponent out of range in '" + t + "'");
    terms.push_back({static_cast<int>(i), static_cast<int>(j), to_rational_token(where, tok[2])});
  }
  auto p = BivariatePolynomial::from_terms(terms);
  if (p.is_zero()) config_error(where, "polynomial is zero");
  return p;
}

Complex coefficient(const std::string& where, const std::vector<std::string>& tok, std::size_t from) {
  if (tok.size() == from) return 1.0;
  if (tok.size() != from + 2) config_error(where, "expected an optional 're im' coefficient in '" +
                                                      boost::algorithm::join(tok, " ") + "'");
  return {to_double(where, tok[from]), to_double(where, tok[from + 1])};
}

using Scalar = double (*)(double, double);

const std::map<std::string, Scalar>& smooth_table() {
  static const std::map<std::string, Scalar> table{
      {"cos_x", [](double x, double) { return std::cos(x); }},
      {"sin_x", [](double x, double) { return std::sin(x); }},
      {"cos_y", [](double, double y) { return std::cos(y); }},
      {"sin_y", [](double, double y) { return std::sin(y); }},
      {"exp_x", [](double x, double) { return std::exp(x); }},
      {"exp_y", [](double, double y) { return std::exp(y); }},
      {"cos_x_sin_y", [](double x, double y) { return std::cos(x) * std::sin(y); }},
  };
  return table;
}

}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  try {
    pt::read_ini(in, c.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::Config, std::string("malformed config: ") + e.message() + " (line " +
                                       std::to_string(e.line()) + ")");
  }
  for (const auto& [name, sec] : c.tree_)
    if (sec.empty() && !sec.data().empty()) config_error(name, "keys must live inside a [section]");
  return c;
}

void Config::check_schema(const std::map<std::string, std::set<std::string>>& schema) const {
  for (const auto& [name, sec] : tree_) {
    const auto it = schema.find(name);
    if (it == schema.end()) config_error("[" + name + "]", "unknown section");
    for (const auto& [key, value] : sec) {
      bool ok = it->second.contains(key);
      for (const auto& pat : it->second) {
        if (ok) break;
        if (pat.empty() || pat.back() != '#') continue;
        const auto prefix = pat.substr(0, pat.size() - 1);
        ok = key.size() > prefix.size() && key.starts_with(prefix) &&
             std::all_of(key.begin() + static_cast<long>(prefix.size()), key.end(), [](char ch) {
               return ch >= '0' && ch <= '9';
             });
      }
      if (!ok) config_error("[" + name + "] " + key, "unknown key");
      if (!value.empty()) config_error("[" + name + "] " + key, "nested keys are not allowed");
    }
  }
}

bool Config::has_section(const std::string& section) const { return tree_.find(section) != tree_.not_found(); }

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = tree_.get_child_optional(pt::ptree::path_type(section, '\0'));
  return s && s->get_child_optional(pt::ptree::path_type(key, '\0'));
}

std::string Config::text(const std::string& section, const std::string& key) const {
  if (!has(section, key)) config_error("[" + section + "] " + key, "missing required key");
  return clean(tree_.get_child(pt::ptree::path_type(section, '\0'))
                   .get_child(pt::ptree::path_type(key, '\0'))
                   .data());
}

std::string Config::text(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? text(section, key) : fallback;
}

double Config::number(const std::string& section, const std::string& key) const {
  return to_double("[" + section + "] " + key, text(section, key));
}

double Config::number(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

long Config::integer(const std::string& section, const std::string& key) const {
  return to_long("[" + section + "] " + key, text(section, key));
}

long Config::integer(const std::string& section, const std::string& key, long fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

bool Config::flag(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const auto v = boost::algorithm::to_lower_copy(text(section, key));
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  config_error("[" + section + "] " + key, "expected true or false, got '" + v + "'");
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key) const {
  return parse_numbers("[" + section + "] " + key, text(section, key));
}

std::vector<std::vector<double>> Config::groups(const std::string& section, const std::string& key) const {
  const std::string where = "[" + section + "] " + key;
  std::vector<std::vector<double>> out;
  for (const auto& t : terms_of(text(section, key))) out.push_back(parse_numbers(where, t));
  return out;
}

std::vector<std::string> Config::keys(const std::string& section) const {
  std::vector<std::string> out;
  if (!has_section(section)) return out;
  for (const auto& [key, value] : tree_.get_child(pt::ptree::path_type(section, '\0'))) out.push_back(key);
  return out;
}

nlohmann::ordered_json Config::echo() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [name, sec] : tree_) {
    auto& s = j[name] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : sec) s[key] = clean(value.data());
  }
  return j;
}

std::vector<double> parse_numbers(const std::string& where, const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ", \t")) out.push_back(to_double(where, tok));
  if (out.empty()) config_error(where, "empty list");
  return out;
}

Region make_region(const Config& c, const std::string& section) {
  const std::string shape = c.text(section, "shape", "rectangle");
  const std::string where = "[" + section + "]";
  if (shape == "rectangle") {
    const auto b = c.numbers(section, "bounds");
    if (b.size() != 4) config_error(where + " bounds", "expected 'xlo xhi ylo yhi'");
    if (c.has(section, "center") || c.has(section, "radius")) config_error(where, "center/radius belong to discs");
    try {
      return Region::rectangle(b[0], b[1], b[2], b[3]);
    } catch (const Error& e) {
      config_error(where, e.what());
    }
  }
  if (shape == "disc") {
    const auto ctr = c.numbers(section, "center");
    if (ctr.size() != 2) config_error(where + " center", "expected 'x y'");
    if (c.has(section, "bounds")) config_error(where, "bounds belong to rectangles");
    try {
      return Region::disc({ctr[0], ctr[1]}, c.number(section, "radius"));
    } catch (const Error& e) {
      config_error(where, e.what());
    }
  }
  config_error(where + " shape", "unknown shape '" + shape + "' (rectangle|disc)");
}

FactoredPolynomial chart_factors(const Config& c) {
  std::map<long, FactoredPolynomial::Factor> by_index;
  for (const auto& key : c.keys("chart")) {
    if (!key.starts_with("factor")) continue;
    const long idx = to_long("[chart] " + key, key.substr(6));
    const std::string power_key = "power" + key.substr(6);
    const long power = c.integer("chart", power_key, 1);
    if (power < 1 || power > 32) config_error("[chart] " + power_key, "power must be in 1..32");
    by_index[idx] = {parse_poly("[chart] " + key, c.text("chart", key)), static_cast<unsigned>(power)};
  }
  for (const auto& key : c.keys("chart"))
    if (key.starts_with("power") && !c.has("chart", "factor" + key.substr(5)))
      config_error("[chart] " + key, "power without a matching factor");
  FactoredPolynomial fp;
  long expect = 1;
  for (auto& [idx, f] : by_index) {
    if (idx != expect) config_error("[chart] factor" + std::to_string(expect), "factors must be numbered 1, 2, ...");
    fp.factors.push_back(std::move(f));
    ++expect;
  }
  return fp;
}

FirstIntegral make_chart(const Config& c) {
  const std::string variant = c.text("chart", "variant");
  const bool has_factors = !chart_factors(c).factors.empty();
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (c.has("chart", k)) config_error(std::string("[chart] ") + k, "not used by variant '" + variant + "'");
  };
  auto domain = [&] {
    const auto b = c.numbers("chart", "domain");
    if (b.size() != 4) config_error("[chart] domain", "expected 'xlo xhi ylo yhi'");
    return Region::rectangle(b[0], b[1], b[2], b[3]);
  };
  auto odd_k = [&] {
    const long k = c.integer("chart", "k");
    if (k < 1 || k % 2 == 0 || k > 99) config_error("[chart] k", "k must be an odd integer in 1..99");
    return static_cast<int>(k);
  };
  FirstIntegral z;
  try {
    if (variant == "elliptic") {
      forbid({"k", "delta", "psi"});
      if (has_factors) config_error("[chart]", "factors are only used by variant 'polynomial'");
      z = FirstIntegral::elliptic(domain());
    } else if (variant == "arc_normal") {
      forbid({"delta", "psi"});
      if (has_factors) config_error("[chart]", "factors are only used by variant 'polynomial'");
      z = FirstIntegral::arc_normal(odd_k(), domain());
    } else if (variant == "point_normal") {
      forbid({"k", "delta"});
      if (has_factors) config_error("[chart]", "factors are only used by variant 'polynomial'");
      z = FirstIntegral::point_normal(parse_poly("[chart] psi", c.text("chart", "psi")), domain());
    } else if (variant == "circle_normal") {
      forbid({"domain", "psi"});
      if (has_factors) config_error("[chart]", "factors are only used by variant 'polynomial'");
      z = FirstIntegral::circle_normal(odd_k(), c.number("chart", "delta"));
    } else if (variant == "polynomial") {
      forbid({"k", "delta", "psi"});
      if (!has_factors) config_error("[chart]", "variant 'polynomial' needs factor1 = \"i j c, ...\"");
      z = FirstIntegral::polynomial_integral(chart_factors(c).expand(), domain());
    } else {
      config_error("[chart] variant",
                   "unknown chart '" + variant + "' (elliptic|arc_normal|point_normal|circle_normal|polynomial)");
    }
    if (c.has("chart", "scale")) {
      const auto s = c.numbers("chart", "scale");
      if (s.size() != 2) config_error("[chart] scale", "expected 're im'");
      z = z.scaled({s[0], s[1]});
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    config_error("[chart]", e.what());
  }
  return z;
}

QuadratureSpec make_spec(const Config& c) {
  QuadratureSpec s;
  const std::string sec = "quadrature";
  s.rel_tol = c.number(sec, "rel_tol", s.rel_tol);
  s.abs_tol = c.number(sec, "abs_tol", s.abs_tol);
  s.max_depth = static_cast<int>(c.integer(sec, "max_depth", s.max_depth));
  s.exclusion_radius_floor = c.number(sec, "exclusion_radius_floor", s.exclusion_radius_floor);
  s.tail_extrapolation = c.flag(sec, "tail_extrapolation", s.tail_extrapolation);
  const long cells = c.integer(sec, "max_cells", static_cast<long>(s.max_cells));
  if (cells < 1) config_error("[quadrature] max_cells", "must be positive");
  s.max_cells = static_cast<std::size_t>(cells);
  s.line_grading = static_cast<int>(c.integer(sec, "line_grading", s.line_grading));
  if (c.has(sec, "singular_points"))
    for (const auto& g : c.groups(sec, "singular_points")) {
      if (g.size() != 2) config_error("[quadrature] singular_points", "expected 'x y, x y'");
      s.singular_points.push_back({g[0], g[1]});
    }
  if (c.has(sec, "singular_lines"))
    for (const auto& t : terms_of(c.text(sec, "singular_lines"))) {
      const auto tok = split(t, " \t");
      if (tok.size() != 2 || (tok[0] != "x" && tok[0] != "y"))
        config_error("[quadrature] singular_lines", "expected 'x c' (vertical) or 'y c' (horizontal) terms");
      s.singular_lines.push_back({tok[0] == "x", to_double("[quadrature] singular_lines", tok[1])});
    }
  try {
    s.validate();
  } catch (const Error& e) {
    config_error("[quadrature]", e.what());
  }
  return s;
}

Field make_field(const std::string& where, const std::string& s, QuadratureSpec* spec) {
  std::vector<Field> parts;
  auto add_line = [&](bool vertical) {
    if (!spec) return;
    for (const auto& l : spec->singular_lines)
      if (l.vertical == vertical && l.position == 0.0) return;
    spec->singular_lines.push_back({vertical, 0.0});
  };
  for (const auto& t : terms_of(s)) {
    const auto tok = split(t, " \t");
    if (tok.empty()) config_error(where, "empty term");
    const std::string& name = tok[0];
    if (name == "const") {
      const Complex c = coefficient(where, tok, 1);
      if (tok.size() != 3) config_error(where, "'const' needs 're im'");
      parts.push_back([c](Point) { return c; });
    } else if (name == "mono") {
      if (tok.size() != 5) config_error(where, "'mono' needs 'i j re im'");
      const long i = to_long(where, tok[1]), j = to_long(where, tok[2]);
      if (i < 0 || j < 0) config_error(where, "negative exponent in '" + t + "'");
      const Complex c = coefficient(where, tok, 3);
      parts.push_back([=](Point p) {
        return c * std::pow(p.x, static_cast<double>(i)) * std::pow(p.y, static_cast<double>(j));
      });
    } else if (name == "abs_x_pow" || name == "abs_y_pow") {
      if (tok.size() < 2) config_error(where, "'" + name + "' needs an exponent");
      const double e = to_double(where, tok[1]);
      const Complex c = coefficient(where, tok, 2);
      const bool on_x = name == "abs_x_pow";
      if (e < 0) add_line(on_x);
      parts.push_back([=](Point p) { return c * std::pow(std::abs(on_x ? p.x : p.y), e); });
    } else if (const auto it = smooth_table().find(name); it != smooth_table().end()) {
      const Complex c = coefficient(where, tok, 1);
      const Scalar g = it->second;
      parts.push_back([=](Point p) { return c * g(p.x, p.y); });
    } else {
      config_error(where, "unknown term '" + name +
                              "' (const|mono|abs_x_pow|abs_y_pow|cos_x|sin_x|cos_y|sin_y|exp_x|exp_y|cos_x_sin_y)");
    }
  }
  if (parts.size() == 1) return parts.front();
  return [parts](Point p) {
    Complex acc = 0;
    for (const auto& f : parts) acc += f(p);
    return acc;
  };
}

SmoothFunction make_smooth(const std::string& where, const std::string& s, const FirstIntegral& z) {
  struct Part {
    std::function<Complex(Point)> v, dx, dy;
  };
  std::vector<Part> parts;
  for (const auto& t : terms_of(s)) {
    const auto tok = split(t, " \t");
    if (tok.empty()) config_error(where, "empty term");
    if (tok[0] == "const") {
      if (tok.size() != 3) config_error(where, "'const' needs 're im'");
      const Complex c = coefficient(where, tok, 1);
      parts.push_back({[c](Point) { return c; }, [](Point) { return Complex(0); }, [](Point) { return Complex(0); }});
    } else if (tok[0] == "mono") {
      if (tok.size() != 5) config_error(where, "'mono' needs 'i j re im'");
      const long i = to_long(where, tok[1]), j = to_long(where, tok[2]);
      if (i < 0 || j < 0) config_error(where, "negative exponent in '" + t + "'");
      const Complex c = coefficient(where, tok, 3);
      auto pw = [](double b, long e) { return e == 0 ? 1.0 : std::pow(b, static_cast<double>(e)); };
      parts.push_back({[=](Point p) { return c * pw(p.x, i) * pw(p.y, j); },
                       [=](Point p) { return i == 0 ? Complex(0) : c * double(i) * pw(p.x, i - 1) * pw(p.y, j); },
                       [=](Point p) { return j == 0 ? Complex(0) : c * double(j) * pw(p.x, i) * pw(p.y, j - 1); }});
    } else if (tok[0] == "z_power") {
      if (tok.size() != 2 && tok.size() != 4) config_error(where, "'z_power' needs 'n [re im]'");
      const long n = to_long(where, tok[1]);
      if (n < 0 || n > 64) config_error(where, "z_power exponent must be in 0..64");
      const Complex c = coefficient(where, tok, 2);
      auto dpow = [=](Point p) { return n == 0 ? Complex(0) : c * double(n) * std::pow(z.eval(p), n - 1); };
      parts.push_back({[=](Point p) { return c * std::pow(z.eval(p), n); },
                       [=](Point p) { return dpow(p) * z.grad(p).first; },
                       [=](Point p) { return dpow(p) * z.grad(p).second; }});
    } else {
      config_error(where, "unknown term '" + tok[0] + "' (const|mono|z_power)");
    }
  }
  auto sum = [parts](auto member) {
    return [parts, member](Point p) {
      Complex acc = 0;
      for (const auto& part : parts) acc += (part.*member)(p);
      return acc;
    };
  };
  return {sum(&Part::v), sum(&Part::dx), sum(&Part::dy)};
}

HolomorphicPolynomial make_holomorphic(const std::string& where, const std::string& s) {
  HolomorphicPolynomial h;
  for (const auto& t : terms_of(s)) {
    const auto v = parse_numbers(where, t);
    if (v.size() != 2) config_error(where, "expected 're im, re im, ...' coefficients, lowest power first");
    h.coeffs.emplace_back(v[0], v[1]);
  }
  return h;
}

std::vector<Point> make_points(const Config& c, const std::string& section, const std::string& key) {
  std::vector<Point> out;
  for (const auto& g : c.groups(section, key)) {
    if (g.size() != 2) config_error("[" + section + "] " + key, "expected 'x y, x y, ...'");
    out.push_back({g[0], g[1]});
  }
  return out;
}

Grid make_grid(const Config& c, const std::string& section, const Region& omega) {
  const auto n = c.numbers(section, "grid");
  if (n.size() != 2 || n[0] < 1 || n[1] < 1 || n[0] != std::floor(n[0]) || n[1] != std::floor(n[1]) ||
      n[0] * n[1] > 1e6)
    config_error("[" + section + "] grid", "expected 'nx ny' positive integers");
  const Region box = omega.is_rectangle()
                         ? omega
                         : Region::rectangle(omega.center().x - omega.radius(), omega.center().x + omega.radius(),
                                             omega.center().y - omega.radius(), omega.center().y + omega.radius());
  const std::string layout = c.text(section, "layout", "cell_centred");
  const auto nx = static_cast<std::size_t>(n[0]), ny = static_cast<std::size_t>(n[1]);
  if (layout == "cell_centred") return Grid::cell_centred(box, nx, ny);
  if (layout == "lattice") {
    if (nx < 2 || ny < 2) config_error("[" + section + "] grid", "a lattice needs two nodes per axis");
    return Grid::lattice(box, nx, ny);
  }
  config_error("[" + section + "] layout", "unknown layout '" + layout + "' (cell_centred|lattice)");
}

}  // namespace hypocauchy::cli
