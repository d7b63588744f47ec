#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "adiaband/degennes.hpp"
#include "adiaband/factorization.hpp"
#include "adiaband/magnetic_well.hpp"

namespace adiaband::cli {

inline constexpr int kSchemaVersion = 1;

enum class Experiment {
  moyal_check,
  projector_build,
  orthogonality,
  factorization,
  magnetic_well,
  degennes,
  functional_calculus
};

std::string to_string(Experiment e);

// Schema violation; `path` is a JSON pointer to the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ModelConfig {
  std::string name;  // two_level, dirac, xi_only, magnetic_well
  double delta = 1.0;
  MagneticWellSpec well;
};

struct RunConfig {
  Experiment experiment = Experiment::moyal_check;
  std::uint64_t seed = 0;
  std::string output_dir;
  int size_cap = kDefaultSizeCap;

  PhaseSpaceGrid grid;
  std::vector<double> h_values;
  int K = 1;
  ModelConfig model;
  GapSpec gap;
  GapSpec gap2;
  NodeSolver solver = NodeSolver::basis;
  GaugeSplit gauge = GaugeSplit::equal;

  // magnetic_well / functional_calculus
  int fiber_m = 12;
  int base_n = 256;
  double box_factor = 20.0;
  double window_C = 2.0;
  bool quasimodes = true;
  double spectral_slope_min = 2.3;
  double half_width = 2.6;
  double xi_reach = 2.0;
  double epsilon = 0.2;

  // degennes
  std::vector<double> gammas;
  std::vector<double> sigmas;
  int n_max = 2;
  bool minima = true;

  nlohmann::json document;  // the validated input, echoed into every report
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// FNV-1a 64 of the compact dump of the document (keys sorted).
std::string config_hash(const nlohmann::json& doc);

}  // namespace adiaband::cli
