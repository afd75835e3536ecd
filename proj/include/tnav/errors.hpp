#pragma once

#include <stdexcept>
#include <string>

namespace tnav {

/// A parameter set violates one of its invariants. The message names the invariant.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Allocation of a grid or record table failed or would exceed index range.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// World generation could not satisfy its placement constraints.
class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tnav
