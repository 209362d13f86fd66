/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_COMMANDS_HPP
#define STM_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "stm/gradcheck.hpp"

namespace stm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitGradientFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInputError = 3;
inline constexpr int kExitOutputError = 4;
inline constexpr int kExitSolveError = 5;

struct RunOptions {
  std::string problem_path;
  std::string out_dir;
  int stride = 50;
};

/// Optimizes the problem and writes manifest.json, history.csv,
/// density_final.csv, density_final.pgm, and density_NNNNNN.pgm for every
/// stride-th iteration before the last. Warnings go to err.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct CheckOptions {
  std::string problem_path;
  int probes = 20;
  std::uint32_t seed = kGradientCheckSeed;
};

int cmd_check_gradients(const CheckOptions& options, std::ostream& out,
                        std::ostream& err);

int cmd_render(const std::string& csv_path, const std::string& image_path,
               std::ostream& err);

}  // namespace stm

#endif  // STM_COMMANDS_HPP
