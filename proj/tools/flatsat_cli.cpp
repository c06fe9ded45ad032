// flatsat command-line front end.
//
// Exit codes: 0 clean, 1 usage or config error, 2 synthesis infeasible,
// 3 monitor or verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <yaml-cpp/yaml.h>

#include "flatsat/certificate_io.hpp"
#include "flatsat/errors.hpp"
#include "flatsat/run_config.hpp"
#include "flatsat/saturation.hpp"
#include "flatsat/simulation.hpp"
#include "flatsat/synthesis.hpp"
#include "flatsat/trace_io.hpp"

namespace fs = std::filesystem;
using namespace flatsat;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitMonitor = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig load_config_or_default(const std::string& path) {
  return path.empty() ? RunConfig{} : load_run_config(path);
}

fs::path output_dir(const RunConfig& config, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("FLATSAT_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return config.output_dir;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

CertificateDocument certificate_for_run(const RunConfig& config, const std::string& cert_flag) {
  if (!cert_flag.empty()) return load_certificate(cert_flag);
  if (config.certificate) return load_certificate(*config.certificate);
  return synthesize(config);
}

std::string report_text(const CertificateDocument& doc) {
  const EllipsoidCert& c = doc.cert;
  const ConstraintParams& p = doc.params;
  std::string s;
  s += fmt::format("constraints: g = {} T_max = {} phi_max = {} theta_max = {} eps_max = {}\n",
                   p.g(), p.t_max(), p.phi_max(), p.theta_max(), p.eps_max());
  s += fmt::format("alpha = {}\n", c.gain.alpha);
  s += fmt::format("p1 = {:.6f}\np2 = {:.6f}\np3 = {:.6f}\n", c.gain.p1, c.gain.p2, c.gain.p3);
  s += fmt::format("rho = {:.6f}\neps = {:.6f}\ntau = {:.6f}\ngamma = {}\n", c.rho, c.eps, c.tau,
                   c.gamma);
  s += fmt::format("lyapunov residual = {:.3e}\n", lyapunov_residual(c.gain));
  s += fmt::format("ellipsoid projection area = {:.6f}\n", projection_area(c));
  s += fmt::format("margins: lmi = {} cert = {} identity = {} table = {}\n", doc.margins.lmi,
                   doc.margins.cert, doc.margins.identity, doc.margins.table);
  return s;
}

int cmd_synth(const std::string& config_path, const std::string& out_flag) {
  const RunConfig config = load_config_or_default(config_path);
  const CertificateDocument doc = synthesize(config);
  const fs::path dir = output_dir(config, out_flag);
  const std::string report = report_text(doc);
  save_certificate(dir / "certificate.yaml", doc);
  write_file(dir / "synth_report.txt", report);
  std::cout << report << "certificate: " << (dir / "certificate.yaml").string() << "\n";
  return kExitClean;
}

int cmd_saturate(const std::vector<double>& v, const std::string& config_path, bool oracle) {
  if (v.size() != 3) throw UsageError("saturate expects exactly three components v1 v2 v3");
  const RunConfig config = load_config_or_default(config_path);
  const FlatInput in(v[0], v[1], v[2]);
  const SaturationResult r = saturate(in, config.constraints);
  std::cout << fmt::format("lambda = {:.17g}\n", r.lambda);
  std::cout << fmt::format("v_out = {:.17g} {:.17g} {:.17g}\n", r.v_out.x(), r.v_out.y(),
                           r.v_out.z());
  std::cout << fmt::format("saturated = {}\n", r.saturated);
  std::cout << fmt::format("active = {}\n", to_string(r.active));
  if (oracle) {
    const double lo = saturate_oracle(in, config.constraints);
    std::cout << fmt::format("oracle_lambda = {:.17g}\n", lo);
    std::cout << fmt::format("oracle_difference = {:.3e}\n", std::abs(lo - r.lambda));
  }
  return kExitClean;
}

int cmd_simulate(const std::string& config_path, const std::string& cert_flag,
                 const std::string& out_flag) {
  const RunConfig config = load_config_or_default(config_path);
  const CertificateDocument doc = certificate_for_run(config, cert_flag);
  const Scenario scenario = make_scenario(config, doc);
  scenario.validate();
  const Trace trace = run(scenario);
  const Metrics m = metrics(trace, scenario, config.scenario.steady_start);

  const fs::path dir = output_dir(config, out_flag);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "trace.csv", std::ios::binary);
    write_trace_csv(csv, trace, 0);
  }
  YAML::Node summary = summary_node(m, trace);
  summary["gamma"] = doc.cert.gamma;
  summary["steady_start"] = config.scenario.steady_start;
  write_file(dir / "summary.yaml", emit_yaml(summary));

  std::cout << fmt::format("steps = {}\n", m.steps);
  std::cout << fmt::format("steady_state_rms_error = {:.6f}\n", m.rms_position_error);
  std::cout << fmt::format("steady_state_max_error = {:.6f}\n", m.max_position_error);
  std::cout << fmt::format("final_error = {:.6f}\n", m.final_position_error);
  std::cout << fmt::format("saturation_duty = {:.4f}\n", m.saturation_duty);
  std::cout << fmt::format("monitors = {}\n", trace.clean() ? "clean" : "violated");
  for (const std::string& v : trace.violations) std::cerr << "violation: " << v << "\n";
  if (trace.aborted) std::cerr << "aborted: " << trace.abort_reason << "\n";
  std::cout << "trace: " << (dir / "trace.csv").string() << "\n";
  return trace.clean() ? kExitClean : kExitMonitor;
}

int cmd_verify(const std::string& cert_path, int samples, std::optional<std::uint64_t> seed) {
  if (samples <= 0) throw UsageError("--samples must be positive");
  const CertificateDocument doc = load_certificate(cert_path);
  const std::uint64_t s = seed.value_or(doc.seed);
  const VerificationReport r = verify_cert(doc.cert, doc.params, samples, s, doc.margins);
  std::cout << fmt::format("samples = {}\nseed = {}\n", r.samples, r.seed);
  std::cout << fmt::format("saturated = {}\n", r.saturated);
  std::cout << fmt::format("nagumo_failures = {}\ndecay_failures = {}\ngain_failures = {}\n",
                           r.nagumo_failures, r.decay_failures, r.gain_failures);
  std::cout << fmt::format("worst_nagumo = {:.6e}\nworst_decay = {:.6e}\n", r.worst_nagumo,
                           r.worst_decay);
  if (r.saturated > 0) {
    std::cout << fmt::format("worst_gamma_lambda = {:.6f}\n", r.worst_gamma_lambda);
  }
  if (!r.passed()) {
    const FlatState& w = r.worst_state;
    std::cout << fmt::format("worst_sample = {} at [{:.6f}, {:.6f}, {:.6f}, {:.6f}, {:.6f}, {:.6f}]\n",
                             r.worst_index, w[0], w[1], w[2], w[3], w[4], w[5]);
  }
  std::cout << "result = " << (r.passed() ? "pass" : "fail") << "\n";
  return r.passed() ? kExitClean : kExitMonitor;
}

int cmd_sweep(const std::string& config_path, const std::string& cert_flag,
              const std::string& out_flag) {
  const RunConfig config = load_config_or_default(config_path);
  const CertificateDocument doc = certificate_for_run(config, cert_flag);
  const fs::path dir = output_dir(config, out_flag);
  fs::create_directories(dir);

  std::vector<FlatState> starts;
  if (config.sweep.boundary_starts > 0) {
    starts = halton_boundary_points(doc.cert, config.sweep.boundary_starts);
  } else {
    starts.push_back(config.scenario.initial_state);
  }

  YAML::Node summary;
  bool all_clean = true;
  for (const double gamma : config.sweep.gammas) {
    CertificateDocument run_doc = doc;
    run_doc.cert.gamma = gamma;
    Scenario scenario = make_scenario(config, run_doc);
    scenario.enforce_invariance = config.sweep.boundary_starts > 0 || scenario.enforce_invariance;

    const std::string name = fmt::format("trace_gamma_{}.csv", gamma);
    std::ofstream csv(dir / name, std::ios::binary);
    YAML::Node entry;
    entry["gamma"] = gamma;
    entry["csv"] = name;
    int clean_runs = 0;
    int saturated_steps = 0;
    double worst_level = 0.0;
    for (std::size_t i = 0; i < starts.size(); ++i) {
      scenario.initial_state = starts[i];
      scenario.validate();
      const Trace trace = run(scenario);
      const Metrics m = metrics(trace, scenario, config.scenario.steady_start);
      write_trace_csv(csv, trace, static_cast<int>(i), i == 0);
      clean_runs += trace.clean() ? 1 : 0;
      for (const TraceRow& r : trace.rows) saturated_steps += r.saturated ? 1 : 0;
      worst_level = std::max(worst_level, m.max_level_ratio);
      for (const std::string& v : trace.violations) {
        std::cerr << fmt::format("gamma {} run {}: {}\n", gamma, i, v);
      }
    }
    entry["runs"] = static_cast<int>(starts.size());
    entry["clean_runs"] = clean_runs;
    entry["saturated_steps"] = saturated_steps;
    entry["max_level_ratio"] = worst_level;
    summary["sweep"].push_back(entry);
    all_clean = all_clean && clean_runs == static_cast<int>(starts.size());
    std::cout << fmt::format("gamma = {}: {}/{} runs clean, saturated steps {}, max V/eps {:.9f}\n",
                             gamma, clean_runs, starts.size(), saturated_steps, worst_level);
  }
  summary["eps"] = doc.cert.eps;
  summary["all_clean"] = all_clean;
  write_file(dir / "sweep_summary.yaml", emit_yaml(summary));
  std::cout << "summary: " << (dir / "sweep_summary.yaml").string() << "\n";
  return all_clean ? kExitClean : kExitMonitor;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flat-output saturation, invariant-ellipsoid synthesis and closed-loop simulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string cert_path;
  std::string out_dir;

  auto* synth = app.add_subcommand("synth", "Synthesize P and the invariant ellipsoid level");
  synth->add_option("-c,--config", config_path, "Run configuration (YAML)")->check(CLI::ExistingFile);
  synth->add_option("-o,--out", out_dir, "Output directory (overrides config and FLATSAT_OUTPUT_DIR)");

  std::vector<double> v;
  bool oracle = false;
  auto* sat = app.add_subcommand("saturate", "Ray-saturate one flat input onto V_c");
  sat->add_option("v", v, "Flat input components v1 v2 v3")->expected(3)->required();
  sat->add_option("-c,--config", config_path, "Run configuration for constraint parameters")
      ->check(CLI::ExistingFile);
  sat->add_flag("--oracle", oracle, "Also print the bisection reference lambda");

  auto* sim = app.add_subcommand("simulate", "Run one closed-loop scenario");
  sim->add_option("-c,--config", config_path, "Run configuration (YAML)")->check(CLI::ExistingFile);
  sim->add_option("--certificate", cert_path, "Certificate to use instead of synthesizing")
      ->check(CLI::ExistingFile);
  sim->add_option("-o,--out", out_dir, "Output directory");

  int samples = 10000;
  std::optional<std::uint64_t> seed;
  auto* ver = app.add_subcommand("verify", "Sample-check a certificate on its ellipsoid boundary");
  ver->add_option("--certificate", cert_path, "Certificate file")->required()->check(CLI::ExistingFile);
  ver->add_option("-n,--samples", samples, "Number of boundary samples")->capture_default_str();
  ver->add_option("--seed", seed, "Sampling seed (defaults to the certificate seed)");

  auto* sweep = app.add_subcommand("sweep", "Run the gamma sweep over boundary starts");
  sweep->add_option("-c,--config", config_path, "Run configuration (YAML)")->check(CLI::ExistingFile);
  sweep->add_option("--certificate", cert_path, "Certificate to use instead of synthesizing")
      ->check(CLI::ExistingFile);
  sweep->add_option("-o,--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(config_path, out_dir);
    if (*sat) return cmd_saturate(v, config_path, oracle);
    if (*sim) return cmd_simulate(config_path, cert_path, out_dir);
    if (*ver) return cmd_verify(cert_path, samples, seed);
    if (*sweep) return cmd_sweep(config_path, cert_path, out_dir);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SynthesisError& e) {
    std::cerr << "synthesis infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
