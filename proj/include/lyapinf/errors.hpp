#pragma once

#include <stdexcept>
#include <string>

namespace lyapinf {

/// Invalid user-supplied configuration (unknown system name, bad scheme, ...).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed, empty, or inconsistent data (shape mismatch, empty snapshot set).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (non-finite input, eigendecomposition failure, non-PD matrix).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lyapinf
