#pragma once

#include <stdexcept>
#include <string>

namespace sshgl {

// Parameter or input outside its documented domain. Carries the offending
// key so the CLI can emit a diagnostic naming it together with the valid range.
class InvalidParameter : public std::invalid_argument {
 public:
  InvalidParameter(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Config-file specific variant (unknown key, malformed value).
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Dense eigensolver hit its iteration limit; the message carries the matrix
// parameters so the failing case can be reproduced.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& message) : std::runtime_error(message) {}
};

// Bulk gap closed where a gapped bulk is a precondition (Zak phase,
// edge-state classification at the reference angle).
class DegenerateBulk : public std::runtime_error {
 public:
  explicit DegenerateBulk(const std::string& message) : std::runtime_error(message) {}
};

// An evolution engine was asked to run outside its domain (e.g. the closed
// spectral engine with gamma != 0).
class EngineMismatch : public std::invalid_argument {
 public:
  explicit EngineMismatch(const std::string& message) : std::invalid_argument(message) {}
};

// A fixed-step integrator violated a conservation bound; the message carries
// a step-size diagnostic.
class IntegratorFailure : public std::runtime_error {
 public:
  explicit IntegratorFailure(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace sshgl
