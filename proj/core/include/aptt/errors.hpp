#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aptt {

/// Bad configuration or malformed input. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear solve failed to reach its tolerance. Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density or temperature lost strict positivity at a grid node, i.e. the
/// no-vacuum / no-absolute-zero assumption of the model broke down (usually a
/// sign of too-loose truncation tolerances). Maps to CLI exit code 4.
class PositivityError : public std::runtime_error {
 public:
  PositivityError(const std::string& msg, std::vector<int> node)
      : std::runtime_error(msg), node_(std::move(node)) {}
  const std::vector<int>& node() const noexcept { return node_; }

 private:
  std::vector<int> node_;
};

/// Filesystem or format failure. Maps to CLI exit code 5.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aptt
