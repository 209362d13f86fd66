/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_FIELDS_HPP
#define STM_FIELDS_HPP

#include <array>
#include <vector>

#include <Eigen/Core>

#include "stm/mesh.hpp"
#include "stm/problem.hpp"

namespace stm {

/// Per-element design densities rho_e in [rho_min, 1].
struct DensityField {
  Eigen::VectorXd rho;

  double mass(const Mesh& mesh) const {
    return rho.sum() * mesh.element_volume();
  }
};

struct GaussPointStress {
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  double s1 = 0.0;  // first (largest) principal stress
};

/// Plane stress state at the four Gauss points of every element.
struct StressField {
  std::vector<std::array<GaussPointStress, 4>> elements;

  int element_count() const { return static_cast<int>(elements.size()); }

  /// Largest s1 over all Gauss points of all elements.
  double max_principal() const;
};

/// Edge-connected set of elements sharing one dissipation-rate equality
/// constraint. Membership is frozen at detection.
struct InelasticDomain {
  int id = 0;
  std::vector<int> elements;    // sorted
  double reference_rate = 0.0;  // dissipation rate at detection, unit flow multiplier
};

/// Uniform start: rho_e = mass_fraction on designable elements, rho_min on
/// passive ones, so the total mass equals the budget exactly.
DensityField init_density(const ProblemDefinition& pd, const Mesh& mesh);

}  // namespace stm

#endif  // STM_FIELDS_HPP
