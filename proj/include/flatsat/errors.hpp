#pragma once

#include <stdexcept>
#include <string>

namespace flatsat {

/// Raised when an input lies outside the domain of a map (e.g. v3 <= -g).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when certificate synthesis has no feasible solution.
class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or invalid configuration / certificate documents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flatsat
