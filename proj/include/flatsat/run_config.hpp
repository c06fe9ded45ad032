#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flatsat/certificate_io.hpp"
#include "flatsat/simulation.hpp"

namespace flatsat {

struct SynthesisConfig {
  double alpha = 0.75;
  double gamma = 1.0;
  double margin = 1e-6;
  /// Fixed P (verify-only mode); when absent P is synthesized from alpha.
  std::optional<GainMatrix> gain;
};

struct ScenarioConfig {
  Reference reference;
  FlatState initial_state = (FlatState() << -3.77, -0.46, -3.60, 0.94, -0.24, 2.31).finished();
  double duration = 20.0;
  double dt = 0.02;
  YawProfile psi;
  bool feedforward = false;
  bool enforce_invariance = false;
  double steady_start = 0.0;
};

struct SweepConfig {
  std::vector<double> gammas{1.0, 5.0, 15.0};
  /// Number of deterministic starts on the boundary of B_P(eps); 0 runs the
  /// scenario initial state only.
  int boundary_starts = 20;
};

/// Full run configuration. Parsed from a YAML document whose sections mirror
/// the members below; every mapping rejects unknown keys, and every omitted
/// value takes the reference default (g = 9.81, T_max = 1.45 g, 10 deg tilt,
/// alpha = 0.75, gamma = 1, dt = 0.02 s).
struct RunConfig {
  ConstraintParams constraints = ConstraintParams::reference();
  SynthesisConfig synthesis;
  ScenarioConfig scenario;
  SweepConfig sweep;
  std::optional<std::filesystem::path> certificate;
  std::filesystem::path output_dir = "flatsat_out";
  std::uint64_t seed = 1;
  int verify_samples = 10000;
};

RunConfig parse_run_config(const std::string& yaml_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Runs the synthesis chain described by the config (or wraps its fixed P).
CertificateDocument synthesize(const RunConfig& config);

Scenario make_scenario(const RunConfig& config, const CertificateDocument& doc);

}  // namespace flatsat
