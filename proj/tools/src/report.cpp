#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "adiaband_cli/app.hpp"

namespace adiaband::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (!v.is_number()) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v.get<double>());
  return buf;
}

std::string assertion_line(const json& a, const json& meta) {
  const bool pass = a.value("pass", false);
  const std::string name = a.value("name", std::string("?"));
  std::string line = (pass ? "PASS " : "FAIL ") + name;
  if (pass) {
    line += " (" + num(a["value"]) + ")";
  } else {
    const std::string cmp = a.value("comparison", std::string());
    line += " " + num(a["value"]) + (cmp == ">=" ? " < " : " > ") + num(a["threshold"]);
    if (meta.contains("K")) line += " (K=" + std::to_string(meta["K"].get<int>()) + ")";
  }
  if (a.contains("note")) line += " [" + a["note"].get<std::string>() + "]";
  return line;
}

}  // namespace

int report_command(const std::string& dir, std::ostream& out, std::ostream& err) {
  const fs::path root(dir);
  const fs::path report = root / "report.json";
  if (!fs::exists(report)) {
    err << "adiaband: incomplete run in " << dir << ": report.json missing\n";
    return kExitError;
  }
  json j;
  try {
    std::ifstream in(report);
    j = json::parse(in);
  } catch (const json::exception& e) {
    err << "adiaband: unreadable " << report.string() << ": " << e.what() << "\n";
    return kExitError;
  }
  if (j.value("schema_version", 0) != 1) {
    err << "adiaband: " << report.string() << ": unsupported schema version\n";
    return kExitError;
  }
  for (const auto& t : j["tables"]) {
    if (!fs::exists(root / t["file"].get<std::string>())) {
      err << "adiaband: incomplete run in " << dir << ": " << t["file"].get<std::string>() << " missing\n";
      return kExitError;
    }
  }

  const json& meta = j["metadata"];
  out << j["experiment"].get<std::string>() << "  config " << j["config_hash"].get<std::string>() << "  status "
      << j["status"].get<std::string>() << "\n\n";
  for (const auto& a : j["assertions"]) {
    out << assertion_line(a, meta);
    if (!a.value("pass", false) && !a["table"].get<std::string>().empty())
      out << "  -> " << (root / a["table"].get<std::string>()).string();
    out << "\n";
  }

  if (!j["slopes"].empty()) {
    out << "\nslopes\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-32s %-9s %8s %8s %6s %9s  %s\n", "defect", "against", "slope", "r^2", "used",
                  "threshold", "table");
    out << buf;
    for (const auto& s : j["slopes"]) {
      const std::string used = std::to_string(s["used"].get<int>()) + "/" + std::to_string(s["points"].size());
      std::snprintf(buf, sizeof buf, "  %-32s %-9s %8s %8s %6s %9s  %s\n", s["name"].get<std::string>().c_str(),
                    s["variable"].get<std::string>().c_str(),
                    s["all_saturated"].get<bool>() ? "floor" : num(s["slope"]).c_str(), num(s["r_squared"]).c_str(),
                    used.c_str(), num(s["threshold"]).c_str(), s["table"].get<std::string>().c_str());
      out << buf;
    }
  }

  if (meta.contains("theta")) {
    out << "\ndispersion minima Theta^[n-1](gamma)\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %8s %3s %14s %12s\n", "gamma", "n", "theta", "sigma*");
    out << buf;
    for (const auto& t : meta["theta"]) {
      if (t["theta"].is_null()) {
        std::snprintf(buf, sizeof buf, "  %8s %3d %14s\n", t["gamma"].get<std::string>().c_str(), t["n"].get<int>(),
                      "no minimum");
      } else {
        std::snprintf(buf, sizeof buf, "  %8s %3d %14.9f %12.6f\n", t["gamma"].get<std::string>().c_str(),
                      t["n"].get<int>(), t["theta"].get<double>(), t["sigma_star"].get<double>());
      }
      out << buf;
    }
  }

  out << "\ndata files\n";
  for (const auto& t : j["tables"])
    out << "  " << (root / t["file"].get<std::string>()).string() << "  (" << t["rows"].get<int>() << " rows)\n";
  return kExitPass;
}

}  // namespace adiaband::cli
