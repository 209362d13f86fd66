/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_SENSITIVITY_HPP
#define STM_SENSITIVITY_HPP

#include <vector>

#include <Eigen/Core>

#include "stm/fem.hpp"
#include "stm/fields.hpp"
#include "stm/mesh.hpp"

namespace stm {

/// All density gradients of one iteration. Box-constraint gradients are
/// Kronecker rows and stay implicit; box_gradient materializes one on
/// demand.
struct GradientBundle {
  Eigen::VectorXd objective;                 // <= 0 everywhere
  Eigen::VectorXd mass;                      // element volumes, density-independent
  std::vector<Eigen::VectorXd> dissipation;  // one per inelastic domain
};

/// d f / d rho_e = -u_e^T (p rho_e^(p-1) k0) u_e.
Eigen::VectorXd objective_gradient(const Mesh& mesh, const ElementStiffness& element,
                                   const DensityField& rho, double penalty,
                                   const Eigen::VectorXd& u);

/// Gradient of the mass constraint: the element volume vector.
Eigen::VectorXd mass_gradient(const Mesh& mesh);

/// Kronecker-delta row of an active box constraint.
Eigen::VectorXd box_gradient(int active_element, int element_count);

/// Back-substitution on the iteration's factorization: K psi = rhs.
Eigen::VectorXd adjoint_solve(const FemSolver& solver, const Eigen::VectorXd& rhs_full);

/// d s1 / d (sxx, syy, sxy) on the larger-eigenvalue branch; at an exactly
/// hydrostatic state the (1/2, 1/2, 0) subgradient is returned.
Eigen::Vector3d principal_stress_derivative(double sxx, double syy, double sxy);

/// Elements whose principal state is nearly degenerate (s1 - s2 below
/// 1e-9 of the largest stress component); the gradient is still valid on
/// the chosen branch but the constraint is not smooth there.
struct DissipationDiagnostics {
  std::vector<int> near_degenerate_elements;
};

/// Gradient of one domain's dissipation rate with respect to every design
/// density: the explicit SIMP term for member elements plus the implicit
/// displacement coupling folded through a single adjoint solve.
Eigen::VectorXd dissipation_gradient(const Mesh& mesh, const ElementStiffness& element,
                                     const DensityField& rho, double penalty,
                                     const Eigen::VectorXd& u, const StressField& stress,
                                     const InelasticDomain& domain,
                                     const FemSolver& solver,
                                     DissipationDiagnostics* diagnostics = nullptr);

GradientBundle compute_gradients(const Mesh& mesh, const ElementStiffness& element,
                                 const DensityField& rho, double penalty,
                                 const Eigen::VectorXd& u, const StressField& stress,
                                 const std::vector<InelasticDomain>& domains,
                                 const FemSolver& solver,
                                 DissipationDiagnostics* diagnostics = nullptr);

}  // namespace stm

#endif  // STM_SENSITIVITY_HPP
