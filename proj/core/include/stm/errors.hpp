/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_ERRORS_HPP
#define STM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace stm {

/// Malformed or out-of-range problem document. Carries the offending
/// field path so front ends can report it verbatim.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Numerical failure in the finite element or optimization pipeline
/// (singular stiffness, residual above tolerance, active-set cycling).
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem or file-format failure on the tool boundary.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stm

#endif  // STM_ERRORS_HPP
