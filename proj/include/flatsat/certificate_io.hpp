#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "flatsat/constraint_sets.hpp"
#include "flatsat/synthesis.hpp"

namespace flatsat {

/// Everything needed to re-create and re-check a certificate.
///
/// Serialized as a YAML mapping:
///
///   format: flatsat-certificate
///   version: 1
///   constraints: {g, t_max, phi_max, theta_max, eps_max}
///   gain: {alpha, p1, p2, p3}
///   level: {gamma, rho, eps, tau}
///   seed: <unsigned>
///   margins: {lmi, cert, identity, table}
///
/// eps_max is written for readability and checked against min(phi_max,
/// theta_max) on load. Doubles use 17 significant digits.
struct CertificateDocument {
  ConstraintParams params = ConstraintParams::reference();
  EllipsoidCert cert;
  std::uint64_t seed = 0;
  Margins margins;
};

std::string to_yaml(const CertificateDocument& doc);
CertificateDocument certificate_from_yaml(const std::string& text);

void save_certificate(const std::filesystem::path& path, const CertificateDocument& doc);
CertificateDocument load_certificate(const std::filesystem::path& path);

}  // namespace flatsat
