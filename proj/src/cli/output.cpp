#include "output.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

#include "hypocauchy/error.hpp"

namespace hypocauchy::cli {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

std::string num(std::size_t v) { return fmt::format("{}", v); }
std::string num(int v) { return fmt::format("{}", v); }
std::string boolean(bool v) { return v ? "true" : "false"; }

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void render_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += quote(cells[i]);
  }
  out += '\n';
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("csv row width does not match header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::render() const {
  std::string out;
  render_row(out, header_);
  for (const auto& r : rows_) render_row(out, r);
  return out;
}

CsvTable& RunResult::table(const std::string& file, std::vector<std::string> header) {
  tables.emplace_back(file, CsvTable(std::move(header)));
  return tables.back().second;
}

void RunResult::flag(const std::string& name, bool ok) {
  convergence[name] = ok;
  converged = converged && ok;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

}  // namespace hypocauchy::cli
