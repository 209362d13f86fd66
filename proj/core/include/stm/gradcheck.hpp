/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_GRADCHECK_HPP
#define STM_GRADCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "stm/problem.hpp"

namespace stm {

inline constexpr std::uint32_t kGradientCheckSeed = 911;

struct GradientProbe {
  int element = 0;
  double analytic = 0.0;
  double finite_difference = 0.0;
  double relative_error = 0.0;
};

/// One gradient family: the objective, the mass constraint, or the
/// dissipation constraints pooled over every domain.
struct GradientFamilyReport {
  std::string name;
  double threshold = 0.0;
  double max_relative_error = 0.0;
  std::vector<GradientProbe> probes;
  bool skipped = false;  // dissipation family when no domains form
  bool passed = true;
};

struct GradientCheckReport {
  int probe_count = 0;
  std::uint32_t seed = 0;
  std::vector<GradientFamilyReport> families;
  bool passed = true;
};

/// Central finite-difference audit of every analytic gradient at the
/// problem's initial state: probes random elements, perturbs each density
/// by 1e-6 of its value both ways, and re-solves. Domain membership is
/// frozen at the unperturbed state.
GradientCheckReport check_gradients(const ProblemDefinition& pd, int probe_count,
                                    std::uint32_t seed = kGradientCheckSeed);

std::string gradient_report_text(const GradientCheckReport& report);

}  // namespace stm

#endif  // STM_GRADCHECK_HPP
