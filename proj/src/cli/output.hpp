#pragma once

#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace hypocauchy::cli {

/// Shortest round-trip decimal; "nan", "inf" and "-inf" for non-finite values.
std::string num(double v);
std::string num(std::size_t v);
std::string num(int v);
std::string boolean(bool v);

/// CSV with a mandatory header row, RFC 4180 quoting and '\n' line ends.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void row(std::vector<std::string> cells);
  std::string render() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Everything an experiment produces: tables written in order, plus manifest entries.
struct RunResult {
  std::deque<std::pair<std::string, CsvTable>> tables;  // deque: table() references stay valid
  std::vector<std::pair<std::string, std::string>> texts;
  nlohmann::ordered_json convergence = nlohmann::ordered_json::object();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  bool converged = true;

  CsvTable& table(const std::string& file, std::vector<std::string> header);
  /// Records a convergence flag; any false flag makes the run exit with 3.
  void flag(const std::string& name, bool ok);
};

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hypocauchy::cli
