#pragma once

#include <deque>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "adiaband/slope_fit.hpp"
#include "adiaband_cli/config.hpp"

namespace adiaband::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;  // file stem, written as <name>.csv
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  std::string file() const { return name + ".csv"; }
};

// value <= threshold or value >= threshold; `pass` is decided by the
// experiment (slope checks accept fully saturated tables).
struct Assertion {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<=" or ">="
  bool pass = false;
  std::string table;
  std::string note;
};

struct SlopeRecord {
  std::string name;
  std::string variable;  // "h" or "sqrt(h)"
  SlopeFit fit;
  double threshold = 0.0;
  std::string table;
};

struct RunResult {
  Experiment experiment = Experiment::moyal_check;
  std::vector<Assertion> assertions;
  std::vector<SlopeRecord> slopes;
  std::deque<Table> tables;  // stable references while experiments append
  nlohmann::json metadata = nlohmann::json::object();

  bool pass() const;
};

// Shortest decimal that parses back to the same double.
std::string format_double(double v);
std::string to_csv(const Table& t);

nlohmann::json report_json(const RunConfig& cfg, const RunResult& r);
nlohmann::json failure_manifest(const RunConfig& cfg, const RunResult& r);

// Writes report.json, one CSV per table and, on failure, failures.json.
void write_run(const std::string& dir, const RunConfig& cfg, const RunResult& r);

}  // namespace adiaband::cli
