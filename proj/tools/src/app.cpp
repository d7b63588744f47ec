#include "adiaband_cli/app.hpp"

#include <filesystem>
#include <ostream>

#include <CLI11.hpp>
#include <omp.h>

#include "adiaband_cli/experiments.hpp"

namespace adiaband::cli {

namespace fs = std::filesystem;

int run_command(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(opt.config);
  } catch (const ConfigError& e) {
    err << "adiaband: config error: " << e.what() << "\n";
    return kExitError;
  }
  const std::string dir = !opt.out_dir.empty()       ? opt.out_dir
                          : !cfg.output_dir.empty() ? cfg.output_dir
                                                    : "runs/" + to_string(cfg.experiment);
  if (opt.threads > 0) omp_set_num_threads(opt.threads);

  Logger log;
  if (opt.verbose) log = [&err](const std::string& s) { err << "[adiaband] " << s << "\n"; };
  try {
    // a stale report would make a crashed run look complete
    fs::remove(fs::path(dir) / "report.json");
    const RunResult r = run_experiment(cfg, log);
    write_run(dir, cfg, r);
    out << to_string(cfg.experiment) << ": " << (r.pass() ? "pass" : "FAIL") << " (" << dir << ")\n";
    for (const auto& a : r.assertions)
      if (!a.pass) out << "  failed: " << a.name << "\n";
    return r.pass() ? kExitPass : kExitAssertion;
  } catch (const std::exception& e) {
    err << "adiaband: runtime error: " << e.what() << "\n";
    return kExitError;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adiabatic projector and effective-operator experiments", "adiaband"};
  app.set_version_flag("--version", std::string(ADIABAND_VERSION));
  app.require_subcommand(1);

  RunOptions opt;
  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  run->add_option("config", opt.config, "config file")->required();
  run->add_option("--out", opt.out_dir, "output directory");
  run->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--verbose", opt.verbose, "progress on stderr");

  std::string dir;
  auto* rep = app.add_subcommand("report", "summarize a completed run");
  rep->add_option("dir", dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitError;
  }
  if (*run) return run_command(opt, out, err);
  return report_command(dir, out, err);
}

}  // namespace adiaband::cli
