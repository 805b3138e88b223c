#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "conslaw/grid.hpp"
#include "conslaw/initial_conditions.hpp"
#include "conslaw/solver.hpp"

namespace conslaw {

inline constexpr const char* kVersion = "1.0.0";

struct DissipationStage {
  bool enabled = false;
  std::size_t levels = 64;
  std::optional<double> expected_total;
  double rel_tol = 0.1;
};

struct StructureStage {
  bool enabled = false;
  /// Jump-set radii in units of the spatial cell size.
  std::vector<double> radii_cells{1.0};
  /// Unset means 0.01 * (value range)^3.
  std::optional<double> threshold;
  std::optional<std::size_t> max_flagged;
  /// Blowup fit on the final frame at this point, if given.
  std::vector<double> trace_x;
  std::vector<double> trace_radii_cells{64.0, 32.0, 16.0, 8.0};
};

struct DeGiorgiStage {
  bool enabled = false;
  /// Unset means 2 ||u||_{L^inf(B_1)} of the final frame.
  std::optional<double> U;
  int K = 25;
};

struct CharacteristicsStage {
  bool enabled = false;
  std::vector<double> x0;
  /// Unset means u(T, x0).
  std::optional<double> v0;
  int k = 64;
};

struct DecayStage {
  bool enabled = false;
  std::size_t n_samples = 33;
  double time_origin = 0.0;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<double> expected_gamma;
  double gamma_tol = 0.02;
};

struct ExperimentConfig {
  std::string name;
  std::string flux = "burgers";
  InitialCondition ic;
  std::size_t dim = 1;
  std::size_t n = 1024;
  /// Domain box; empty means the initial condition's default domain.
  std::vector<double> lo;
  std::vector<double> hi;
  double t_end = 1.0;
  SolverConfig solver;
  std::vector<double> snapshots;
  DissipationStage dissipation;
  StructureStage structure;
  DeGiorgiStage degiorgi;
  CharacteristicsStage characteristics;
  DecayStage decay;
  std::uint64_t seed = 0;
  std::string output_dir;

  /// Throws InputError on unknown keys, bad grid sizes or inconsistent stages.
  void validate() const;
  Grid grid() const;
};

/// JSON text <-> config. Unknown fields are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

/// Domain used when the config leaves it empty.
void default_domain(const ExperimentConfig& config, std::vector<double>& lo, std::vector<double>& hi);

struct RunResult {
  std::filesystem::path dir;
  bool ok = true;
  std::size_t checks = 0;
  std::size_t failed_checks = 0;
  std::vector<std::string> errors;
};

/// Runs the configured stages into `output_dir` (or `dir` if given) and
/// writes manifest.json listing every artifact with its SHA-256.
RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& dir = {});

/// Preset names shipped in the preset directory.
std::vector<std::string> preset_names();
std::filesystem::path preset_path(const std::string& name);

}  // namespace conslaw
