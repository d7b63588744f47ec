#pragma once

#include <iosfwd>
#include <string>

namespace adiaband::cli {

enum ExitCode : int { kExitPass = 0, kExitError = 1, kExitAssertion = 2 };

struct RunOptions {
  std::string config;
  std::string out_dir;  // overrides the config's output_dir when set
  int threads = 0;      // 0 keeps the OpenMP default
  bool verbose = false;
};

int run_command(const RunOptions& opt, std::ostream& out, std::ostream& err);

// Summary of a completed run directory.
int report_command(const std::string& dir, std::ostream& out, std::ostream& err);

// Full argument handling of the `adiaband` executable.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace adiaband::cli
