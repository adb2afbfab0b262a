#pragma once

#include <boost/property_tree/ptree.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypocauchy/cauchy.hpp"
#include "hypocauchy/charset.hpp"
#include "hypocauchy/similarity.hpp"

namespace hypocauchy::cli {

/// INI experiment file: one experiment, sections of key = value. Every key read goes
/// through the typed getters; keys not in the subcommand's schema are rejected up front.
class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  /// Rejects sections and keys outside `schema`; a key pattern ending in '#' matches that
  /// prefix followed by digits.
  void check_schema(const std::map<std::string, std::set<std::string>>& schema) const;

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;
  std::string text(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;
  double number(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key, double fallback) const;
  long integer(const std::string& section, const std::string& key) const;
  long integer(const std::string& section, const std::string& key, long fallback) const;
  bool flag(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& section, const std::string& key) const;
  /// Comma-separated groups of whitespace-separated numbers.
  std::vector<std::vector<double>> groups(const std::string& section, const std::string& key) const;
  std::vector<std::string> keys(const std::string& section) const;

  nlohmann::ordered_json echo() const;

 private:
  boost::property_tree::ptree tree_;
};

[[noreturn]] void config_error(const std::string& where, const std::string& what);

std::vector<double> parse_numbers(const std::string& where, const std::string& s);

FirstIntegral make_chart(const Config& c);
/// Factors from [chart] factor<N> / power<N>, in index order.
FactoredPolynomial chart_factors(const Config& c);
Region make_region(const Config& c, const std::string& section = "region");
QuadratureSpec make_spec(const Config& c);

/// Field parsed from comma-separated terms; negative powers of |x| or |y| add the
/// matching singular line to `spec` when given.
Field make_field(const std::string& where, const std::string& s, QuadratureSpec* spec);
SmoothFunction make_smooth(const std::string& where, const std::string& s, const FirstIntegral& z);
HolomorphicPolynomial make_holomorphic(const std::string& where, const std::string& s);
std::vector<Point> make_points(const Config& c, const std::string& section, const std::string& key);
Grid make_grid(const Config& c, const std::string& section, const Region& omega);

}  // namespace hypocauchy::cli
