#pragma once

#include <stdexcept>
#include <string>

namespace sparsetone {

// Invalid or inconsistent parameters (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite value encountered in a numeric kernel.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Regression design stayed rank-deficient after the ridge.
class SingularDesignError : public std::runtime_error {
 public:
  explicit SingularDesignError(const std::string& what) : std::runtime_error(what) {}
};

// No sample cleared the heavy-energy threshold; the one-cluster premise failed.
class EnergyTooLowError : public std::runtime_error {
 public:
  explicit EnergyTooLowError(const std::string& what) : std::runtime_error(what) {}
};

// Phase voting never produced a majority region (CLI exit code 1).
class LocationFailedError : public std::runtime_error {
 public:
  explicit LocationFailedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sparsetone
