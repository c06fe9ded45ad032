#include "flatsat/certificate_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "flatsat/errors.hpp"
#include "flatsat/yaml_util.hpp"

namespace flatsat {

namespace {

constexpr const char* kFormat = "flatsat-certificate";
constexpr int kVersion = 1;

}  // namespace

std::string to_yaml(const CertificateDocument& doc) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "format" << YAML::Value << kFormat;
  out << YAML::Key << "version" << YAML::Value << kVersion;

  out << YAML::Key << "constraints" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "g" << YAML::Value << doc.params.g();
  out << YAML::Key << "t_max" << YAML::Value << doc.params.t_max();
  out << YAML::Key << "phi_max" << YAML::Value << doc.params.phi_max();
  out << YAML::Key << "theta_max" << YAML::Value << doc.params.theta_max();
  out << YAML::Key << "eps_max" << YAML::Value << doc.params.eps_max();
  out << YAML::EndMap;

  out << YAML::Key << "gain" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "alpha" << YAML::Value << doc.cert.gain.alpha;
  out << YAML::Key << "p1" << YAML::Value << doc.cert.gain.p1;
  out << YAML::Key << "p2" << YAML::Value << doc.cert.gain.p2;
  out << YAML::Key << "p3" << YAML::Value << doc.cert.gain.p3;
  out << YAML::EndMap;

  out << YAML::Key << "level" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gamma" << YAML::Value << doc.cert.gamma;
  out << YAML::Key << "rho" << YAML::Value << doc.cert.rho;
  out << YAML::Key << "eps" << YAML::Value << doc.cert.eps;
  out << YAML::Key << "tau" << YAML::Value << doc.cert.tau;
  out << YAML::EndMap;

  out << YAML::Key << "seed" << YAML::Value << doc.seed;

  out << YAML::Key << "margins" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lmi" << YAML::Value << doc.margins.lmi;
  out << YAML::Key << "cert" << YAML::Value << doc.margins.cert;
  out << YAML::Key << "identity" << YAML::Value << doc.margins.identity;
  out << YAML::Key << "table" << YAML::Value << doc.margins.table;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

CertificateDocument certificate_from_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("certificate: ") + e.what());
  }
  yaml::require_map(root, "certificate");
  yaml::reject_unknown(root, "certificate",
                       {"format", "version", "constraints", "gain", "level", "seed", "margins"});
  if (yaml::get<std::string>(root, "format", "certificate") != kFormat) {
    throw ConfigError("certificate: unexpected format tag");
  }
  if (yaml::get<int>(root, "version", "certificate") != kVersion) {
    throw ConfigError("certificate: unsupported version");
  }

  const YAML::Node c = yaml::child_map(root, "constraints", "certificate");
  yaml::reject_unknown(c, "constraints", {"g", "t_max", "phi_max", "theta_max", "eps_max"});
  CertificateDocument doc{ConstraintParams(yaml::get<double>(c, "g", "constraints"),
                                           yaml::get<double>(c, "t_max", "constraints"),
                                           yaml::get<double>(c, "phi_max", "constraints"),
                                           yaml::get<double>(c, "theta_max", "constraints")),
                          {}, 0, {}};
  if (c["eps_max"] &&
      std::abs(c["eps_max"].as<double>() - doc.params.eps_max()) > 1e-12) {
    throw ConfigError("certificate: eps_max is not min(phi_max, theta_max)");
  }

  const YAML::Node g = yaml::child_map(root, "gain", "certificate");
  yaml::reject_unknown(g, "gain", {"alpha", "p1", "p2", "p3"});
  doc.cert.gain.alpha = yaml::get<double>(g, "alpha", "gain");
  doc.cert.gain.p1 = yaml::get<double>(g, "p1", "gain");
  doc.cert.gain.p2 = yaml::get<double>(g, "p2", "gain");
  doc.cert.gain.p3 = yaml::get<double>(g, "p3", "gain");

  const YAML::Node l = yaml::child_map(root, "level", "certificate");
  yaml::reject_unknown(l, "level", {"gamma", "rho", "eps", "tau"});
  doc.cert.gamma = yaml::get<double>(l, "gamma", "level");
  doc.cert.rho = yaml::get<double>(l, "rho", "level");
  doc.cert.eps = yaml::get<double>(l, "eps", "level");
  doc.cert.tau = yaml::get<double>(l, "tau", "level");

  doc.seed = yaml::get<std::uint64_t>(root, "seed", "certificate");

  if (root["margins"]) {
    const YAML::Node m = yaml::child_map(root, "margins", "certificate");
    yaml::reject_unknown(m, "margins", {"lmi", "cert", "identity", "table"});
    doc.margins.lmi = yaml::get_or(m, "lmi", doc.margins.lmi, "margins");
    doc.margins.cert = yaml::get_or(m, "cert", doc.margins.cert, "margins");
    doc.margins.identity = yaml::get_or(m, "identity", doc.margins.identity, "margins");
    doc.margins.table = yaml::get_or(m, "table", doc.margins.table, "margins");
  }

  if (!(doc.cert.gain.alpha > 0.0) || !doc.cert.gain.positive_definite()) {
    throw ConfigError("certificate: gain must have alpha > 0 and P > 0");
  }
  if (!(doc.cert.gamma >= 1.0) || !(doc.cert.rho > 0.0) || !(doc.cert.eps > 0.0)) {
    throw ConfigError("certificate: requires gamma >= 1, rho > 0, eps > 0");
  }
  return doc;
}

void save_certificate(const std::filesystem::path& path, const CertificateDocument& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write certificate: " + path.string());
  out << to_yaml(doc);
}

CertificateDocument load_certificate(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read certificate: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return certificate_from_yaml(text.str());
}

}  // namespace flatsat
