#pragma once

#include <stdexcept>
#include <string>

namespace intricacy {

/// Invalid or inconsistent run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical run went off the rails (norm drift, simplex violation,
/// inconsistent event queue, missing front crossing).
class NumericAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace intricacy
