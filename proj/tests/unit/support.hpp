/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_TESTS_SUPPORT_HPP
#define STM_TESTS_SUPPORT_HPP

#include <string>

#include "stm/problem.hpp"

namespace stm::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(STM_FIXTURE_DIR) + "/" + name;
}

inline std::string replace_once(std::string text, const std::string& from,
                                const std::string& to) {
  const auto pos = text.find(from);
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
  return text;
}

/// Bearing-band deep beam on an n x n grid: top edge clamped, upward
/// band load on the bottom mid nodes. Mirror-symmetric about the
/// vertical midline.
inline ProblemDefinition beam_problem(int n, double mass_fraction = 0.4) {
  ProblemDefinition pd;
  pd.nx = n;
  pd.ny = n;
  pd.young_modulus = 1.0;
  pd.poisson_ratio = 0.2;
  pd.tensile_strength = {StrengthMode::kScaledToInitialMax, 0.3};
  pd.mass_fraction = mass_fraction;
  pd.step = 0.05;
  pd.max_iterations = 40;

  LoadSpec load;
  load.at.kind = SelectorKind::kBox;
  load.at.box = {n / 2.0 - 1.5, -0.5, n / 2.0 + 1.5, 0.5};
  load.fy = 1.0 / 3.0;
  pd.loads.push_back(load);

  SupportSpec top;
  top.at.kind = SelectorKind::kEdge;
  top.at.edge = EdgeName::kTop;
  top.fix_x = true;
  top.fix_y = true;
  pd.supports.push_back(top);
  return pd;
}

}  // namespace stm::test

#endif  // STM_TESTS_SUPPORT_HPP
