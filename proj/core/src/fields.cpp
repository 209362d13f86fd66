/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/fields.hpp"

#include <algorithm>
#include <limits>

namespace stm {

double StressField::max_principal() const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& element : elements)
    for (const GaussPointStress& gp : element) best = std::max(best, gp.s1);
  return best;
}

DensityField init_density(const ProblemDefinition& pd, const Mesh& mesh) {
  DensityField field;
  field.rho =
      Eigen::VectorXd::Constant(mesh.element_count(),
                                std::clamp(pd.mass_fraction, pd.rho_min, 1.0));
  for (int e : mesh.passive_elements) field.rho[e] = pd.rho_min;
  return field;
}

}  // namespace stm
