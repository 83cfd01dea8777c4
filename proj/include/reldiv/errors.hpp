#pragma once

#include <stdexcept>
#include <string>

namespace reldiv {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed words, unknown labels, out-of-range parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Group/subgroup/rule configuration that cannot be honoured.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An element, pair or step budget was exhausted; nothing partial is returned.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A radius lies outside the certified region of an atlas.
class RadiusError : public Error {
 public:
  RadiusError(const std::string& what, int required_radius)
      : Error(what), required_radius_(required_radius) {}

  /// Smallest atlas radius that would make the request certifiable (0 if unknown).
  int required_radius() const noexcept { return required_radius_; }

 private:
  int required_radius_;
};

/// Cache file problems: bad magic, version mismatch, checksum failure.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace reldiv
