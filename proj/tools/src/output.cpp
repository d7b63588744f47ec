#include "adiaband_cli/output.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace adiaband::cli {

using nlohmann::json;
namespace fs = std::filesystem;

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::logic_error("table " + name + ": row width differs from header");
  rows.push_back(std::move(row));
}

bool RunResult::pass() const {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

// json has no inf/nan; they go out as strings so nothing is silently nulled
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json slope_json(const SlopeRecord& s) {
  json pts = json::array();
  for (std::size_t k = 0; k < s.fit.h.size(); ++k)
    pts.push_back({{"h", s.fit.h[k]}, {"defect", number(s.fit.defect[k])}, {"saturated", bool(s.fit.saturated[k])}});
  return {{"name", s.name},
          {"variable", s.variable},
          {"slope", s.fit.valid ? number(s.fit.slope) : json(nullptr)},
          {"intercept", s.fit.valid ? number(s.fit.intercept) : json(nullptr)},
          {"r_squared", s.fit.valid ? number(s.fit.r_squared) : json(nullptr)},
          {"used", s.fit.used},
          {"all_saturated", s.fit.all_saturated},
          {"threshold", s.threshold},
          {"pass", slope_at_least(s.fit, s.threshold)},
          {"table", s.table},
          {"points", pts}};
}

json assertion_json(const Assertion& a) {
  json j = {{"name", a.name},     {"value", number(a.value)}, {"threshold", number(a.threshold)},
            {"comparison", a.comparison}, {"pass", a.pass}, {"table", a.table}};
  if (!a.note.empty()) j["note"] = a.note;
  return j;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + cell_text(row[c]);
    out += '\n';
  }
  return out;
}

json report_json(const RunConfig& cfg, const RunResult& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "adiaband";
  j["version"] = ADIABAND_VERSION;
  j["experiment"] = to_string(r.experiment);
  j["config_hash"] = config_hash(cfg.document);
  j["config"] = cfg.document;
  j["status"] = r.pass() ? "pass" : "fail";
  j["assertions"] = json::array();
  for (const auto& a : r.assertions) j["assertions"].push_back(assertion_json(a));
  j["slopes"] = json::array();
  for (const auto& s : r.slopes) j["slopes"].push_back(slope_json(s));
  j["tables"] = json::array();
  for (const auto& t : r.tables) j["tables"].push_back({{"name", t.name}, {"file", t.file()}, {"rows", t.rows.size()}});
  j["metadata"] = r.metadata;
  return j;
}

json failure_manifest(const RunConfig& cfg, const RunResult& r) {
  json f = json::array();
  for (const auto& a : r.assertions)
    if (!a.pass) f.push_back(assertion_json(a));
  return {{"schema_version", kSchemaVersion},
          {"experiment", to_string(r.experiment)},
          {"config_hash", config_hash(cfg.document)},
          {"failures", f}};
}

void write_run(const std::string& dir, const RunConfig& cfg, const RunResult& r) {
  const fs::path root(dir);
  fs::create_directories(root);
  for (const auto& t : r.tables) write_text(root / t.file(), to_csv(t));
  const fs::path failures = root / "failures.json";
  if (r.pass()) fs::remove(failures);
  else write_text(failures, failure_manifest(cfg, r).dump(2) + "\n");
  // report.json last: its presence marks a completed run
  write_text(root / "report.json", report_json(cfg, r).dump(2) + "\n");
}

}  // namespace adiaband::cli
