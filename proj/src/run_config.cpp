#include "flatsat/run_config.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "flatsat/errors.hpp"
#include "flatsat/yaml_util.hpp"

namespace flatsat {

namespace {

template <int N>
Eigen::Matrix<double, N, 1> vector_of(const YAML::Node& node, std::string_view key,
                                      std::string_view where) {
  const YAML::Node child = node[std::string(key)];
  if (!child.IsSequence() || child.size() != static_cast<std::size_t>(N)) {
    throw ConfigError(std::string(where) + "." + std::string(key) + ": expected a list of " +
                      std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) out(i) = yaml::as<double>(child[i], key, where);
  return out;
}

ConstraintParams parse_constraints(const YAML::Node& node) {
  yaml::require_map(node, "constraints");
  yaml::reject_unknown(node, "constraints", {"g", "t_max", "phi_max", "theta_max"});
  const ConstraintParams d = ConstraintParams::reference();
  const double g = yaml::get_or(node, "g", d.g(), "constraints");
  // T_max defaults to 1.45 g for whatever g is configured.
  const double t_max = yaml::get_or(node, "t_max", 1.45 * g, "constraints");
  return {g, t_max, yaml::get_or(node, "phi_max", d.phi_max(), "constraints"),
          yaml::get_or(node, "theta_max", d.theta_max(), "constraints")};
}

SynthesisConfig parse_synthesis(const YAML::Node& node) {
  yaml::require_map(node, "synthesis");
  yaml::reject_unknown(node, "synthesis", {"alpha", "gamma", "margin", "gain"});
  SynthesisConfig s;
  s.alpha = yaml::get_or(node, "alpha", s.alpha, "synthesis");
  s.gamma = yaml::get_or(node, "gamma", s.gamma, "synthesis");
  s.margin = yaml::get_or(node, "margin", s.margin, "synthesis");
  if (node["gain"]) {
    const YAML::Node g = yaml::child_map(node, "gain", "synthesis");
    yaml::reject_unknown(g, "synthesis.gain", {"p1", "p2", "p3"});
    s.gain = GainMatrix{yaml::get<double>(g, "p1", "synthesis.gain"),
                        yaml::get<double>(g, "p2", "synthesis.gain"),
                        yaml::get<double>(g, "p3", "synthesis.gain"), s.alpha};
  }
  if (!(s.alpha > 0.0)) throw ConfigError("synthesis.alpha must be positive");
  if (!(s.gamma >= 1.0)) throw ConfigError("synthesis.gamma must be >= 1");
  if (!(s.margin >= 0.0)) throw ConfigError("synthesis.margin must be non-negative");
  if (s.gain && !s.gain->positive_definite()) {
    throw ConfigError("synthesis.gain: P must be positive definite");
  }
  return s;
}

ScenarioConfig parse_scenario(const YAML::Node& node) {
  yaml::require_map(node, "scenario");
  yaml::reject_unknown(node, "scenario",
                       {"reference", "setpoint", "circular", "reference_velocity", "feedforward",
                        "initial_state", "duration", "dt", "psi", "enforce_invariance",
                        "steady_start"});
  ScenarioConfig s;
  const auto kind = yaml::get_or<std::string>(node, "reference", "origin", "scenario");
  if (kind == "origin") {
    s.reference.kind = ReferenceKind::kOrigin;
  } else if (kind == "setpoint") {
    s.reference.kind = ReferenceKind::kSetpoint;
  } else if (kind == "circular") {
    s.reference.kind = ReferenceKind::kCircular;
  } else {
    throw ConfigError("scenario.reference: expected origin, setpoint or circular");
  }
  if (node["setpoint"]) s.reference.setpoint = vector_of<6>(node, "setpoint", "scenario");
  if (s.reference.kind == ReferenceKind::kSetpoint && !node["setpoint"]) {
    s.reference.setpoint << 0.3, 0.3, 0.8, 0.0, 0.0, 0.0;
  }
  if (node["circular"]) {
    const YAML::Node c = yaml::child_map(node, "circular", "scenario");
    yaml::reject_unknown(c, "scenario.circular", {"radius", "center", "altitude", "omega"});
    CircularReference& circle = s.reference.circle;
    circle.radius = yaml::get_or(c, "radius", circle.radius, "scenario.circular");
    if (c["center"]) circle.center = vector_of<2>(c, "center", "scenario.circular");
    circle.altitude = yaml::get_or(c, "altitude", circle.altitude, "scenario.circular");
    circle.omega = yaml::get_or(c, "omega", circle.omega, "scenario.circular");
  }
  const auto vel = yaml::get_or<std::string>(node, "reference_velocity", "analytic", "scenario");
  if (vel != "analytic" && vel != "zero") {
    throw ConfigError("scenario.reference_velocity: expected analytic or zero");
  }
  s.reference.analytic_velocity = vel == "analytic";
  s.feedforward = yaml::get_or(node, "feedforward", s.feedforward, "scenario");
  if (node["initial_state"]) s.initial_state = vector_of<6>(node, "initial_state", "scenario");
  s.duration = yaml::get_or(node, "duration", s.duration, "scenario");
  s.dt = yaml::get_or(node, "dt", s.dt, "scenario");
  if (node["psi"]) {
    const YAML::Node psi = yaml::child_map(node, "psi", "scenario");
    yaml::reject_unknown(psi, "scenario.psi", {"offset", "amplitude", "frequency"});
    s.psi.offset = yaml::get_or(psi, "offset", 0.0, "scenario.psi");
    s.psi.amplitude = yaml::get_or(psi, "amplitude", 0.0, "scenario.psi");
    s.psi.frequency = yaml::get_or(psi, "frequency", 0.0, "scenario.psi");
  }
  s.enforce_invariance = yaml::get_or(node, "enforce_invariance", s.enforce_invariance, "scenario");
  s.steady_start = yaml::get_or(node, "steady_start", s.steady_start, "scenario");
  if (!(s.dt > 0.0)) throw ConfigError("scenario.dt must be positive");
  if (!(s.duration >= s.dt)) throw ConfigError("scenario.duration must be at least dt");
  return s;
}

SweepConfig parse_sweep(const YAML::Node& node) {
  yaml::require_map(node, "sweep");
  yaml::reject_unknown(node, "sweep", {"gammas", "boundary_starts"});
  SweepConfig s;
  if (node["gammas"]) {
    const YAML::Node g = node["gammas"];
    if (!g.IsSequence() || g.size() == 0) throw ConfigError("sweep.gammas: expected a list");
    s.gammas.clear();
    for (const auto& item : g) s.gammas.push_back(yaml::as<double>(item, "gammas", "sweep"));
  }
  s.boundary_starts = yaml::get_or(node, "boundary_starts", s.boundary_starts, "sweep");
  for (const double gamma : s.gammas) {
    if (!(gamma >= 1.0)) throw ConfigError("sweep.gammas: every gamma must be >= 1");
  }
  if (s.boundary_starts < 0) throw ConfigError("sweep.boundary_starts must be >= 0");
  return s;
}

}  // namespace

RunConfig parse_run_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig config;
  if (root.IsNull()) return config;
  yaml::require_map(root, "config");
  yaml::reject_unknown(root, "config",
                       {"seed", "output_dir", "certificate", "constraints", "synthesis",
                        "scenario", "sweep", "verify"});
  config.seed = yaml::get_or<std::uint64_t>(root, "seed", config.seed, "config");
  if (root["output_dir"]) {
    config.output_dir = yaml::get<std::string>(root, "output_dir", "config");
  }
  if (root["certificate"]) {
    config.certificate = yaml::get<std::string>(root, "certificate", "config");
  }
  if (root["constraints"]) config.constraints = parse_constraints(root["constraints"]);
  if (root["synthesis"]) config.synthesis = parse_synthesis(root["synthesis"]);
  if (root["scenario"]) config.scenario = parse_scenario(root["scenario"]);
  if (root["sweep"]) config.sweep = parse_sweep(root["sweep"]);
  if (root["verify"]) {
    const YAML::Node v = yaml::child_map(root, "verify", "config");
    yaml::reject_unknown(v, "verify", {"samples"});
    config.verify_samples = yaml::get_or(v, "samples", config.verify_samples, "verify");
    if (config.verify_samples <= 0) throw ConfigError("verify.samples must be positive");
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

CertificateDocument synthesize(const RunConfig& config) {
  CertificateDocument doc{config.constraints, {}, config.seed, {}};
  doc.margins.lmi = config.synthesis.margin;
  const SynthesisConfig& s = config.synthesis;
  if (s.gain) {
    doc.cert = certificate_for_gain(config.constraints, *s.gain, s.gamma);
    // A fixed gain is typically a rounded table entry and is judged at that precision.
    doc.margins.cert = doc.margins.table;
  } else {
    doc.cert = run_procedure_1(config.constraints, s.alpha, s.gamma, s.margin);
  }
  return doc;
}

Scenario make_scenario(const RunConfig& config, const CertificateDocument& doc) {
  Scenario sc;
  const ScenarioConfig& s = config.scenario;
  sc.reference = s.reference;
  sc.initial_state = s.initial_state;
  sc.duration = s.duration;
  sc.dt = s.dt;
  sc.psi = s.psi;
  sc.params = doc.params;
  sc.cert = doc.cert;
  sc.feedforward = s.feedforward;
  sc.enforce_invariance = s.enforce_invariance;
  sc.membership_tol = doc.margins.identity;
  return sc;
}

}  // namespace flatsat
