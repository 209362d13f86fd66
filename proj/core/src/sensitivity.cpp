/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/sensitivity.hpp"

#include <algorithm>
#include <cmath>

namespace stm {

namespace {

Eigen::Matrix<double, 8, 1> gather(const Eigen::VectorXd& u,
                                   const std::array<int, 8>& dofs) {
  Eigen::Matrix<double, 8, 1> ue;
  for (int a = 0; a < 8; ++a) ue[a] = u[dofs[a]];
  return ue;
}

double max_abs_component(const StressField& stress) {
  double best = 0.0;
  for (const auto& element : stress.elements)
    for (const GaussPointStress& gp : element)
      best = std::max({best, std::abs(gp.sxx), std::abs(gp.syy), std::abs(gp.sxy)});
  return best;
}

}  // namespace

Eigen::VectorXd objective_gradient(const Mesh& mesh, const ElementStiffness& element,
                                   const DensityField& rho, double penalty,
                                   const Eigen::VectorXd& u) {
  Eigen::VectorXd grad(mesh.element_count());
  const Eigen::Matrix<double, 8, 8>& k0 = element.k0();
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Eigen::Matrix<double, 8, 1> ue = gather(u, mesh.element_dofs(e));
    const double dk_scale = penalty * std::pow(rho.rho[e], penalty - 1.0);
    grad[e] = -dk_scale * ue.dot(k0 * ue);
  }
  return grad;
}

Eigen::VectorXd mass_gradient(const Mesh& mesh) {
  return Eigen::VectorXd::Constant(mesh.element_count(), mesh.element_volume());
}

Eigen::VectorXd box_gradient(int active_element, int element_count) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(element_count);
  g[active_element] = 1.0;
  return g;
}

Eigen::VectorXd adjoint_solve(const FemSolver& solver, const Eigen::VectorXd& rhs_full) {
  return solver.solve(rhs_full);
}

Eigen::Vector3d principal_stress_derivative(double sxx, double syy, double sxy) {
  const double half_diff = 0.5 * (sxx - syy);
  const double radius = std::hypot(half_diff, sxy);
  if (radius == 0.0) return {0.5, 0.5, 0.0};
  return {0.5 + 0.5 * half_diff / radius, 0.5 - 0.5 * half_diff / radius,
          sxy / radius};
}

Eigen::VectorXd dissipation_gradient(const Mesh& mesh, const ElementStiffness& element,
                                     const DensityField& rho, double penalty,
                                     const Eigen::VectorXd& u, const StressField& stress,
                                     const InelasticDomain& domain,
                                     const FemSolver& solver,
                                     DissipationDiagnostics* diagnostics) {
  const int n_elements = mesh.element_count();
  const double det_j = mesh.det_jacobian();
  const auto& gauss = gauss_points_2x2();
  const Eigen::Matrix3d& d0 = element.d0();
  const double branch_tol = 1e-9 * max_abs_component(stress);

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_elements);
  Eigen::VectorXd dh_du = Eigen::VectorXd::Zero(mesh.dof_count());

  for (int e : domain.elements) {
    const auto dofs = mesh.element_dofs(e);
    const Eigen::Matrix<double, 8, 1> ue = gather(u, dofs);
    const double scale = std::pow(rho.rho[e], penalty);
    const double dscale = penalty * std::pow(rho.rho[e], penalty - 1.0);
    bool degenerate = false;

    for (int i = 0; i < 4; ++i) {
      const GaussPointStress& gp = stress.elements[e][i];
      if (gp.s1 - (gp.sxx + gp.syy - gp.s1) < branch_tol) degenerate = true;

      const Eigen::Vector3d ds1 = principal_stress_derivative(gp.sxx, gp.syy, gp.sxy);
      const Eigen::Matrix<double, 3, 8> b =
          element.strain_displacement(gauss[i].xi, gauss[i].eta);

      // Explicit SIMP term of the stress sensitivity (k = e only).
      grad[e] += det_j * dscale * ds1.dot(d0 * (b * ue));

      // Right-hand side of the adjoint system, d h / d u.
      const Eigen::Matrix<double, 8, 1> ge =
          det_j * scale * (b.transpose() * (d0 * ds1));
      for (int a = 0; a < 8; ++a) dh_du[dofs[a]] += ge[a];
    }
    if (degenerate && diagnostics)
      diagnostics->near_degenerate_elements.push_back(e);
  }

  // Implicit term via one adjoint solve: du/drho_k = -K^-1 (dK/drho_k u)
  // contracted with dh/du gives -p rho_k^(p-1) psi_k . k0 u_k.
  const Eigen::VectorXd psi = solver.solve(dh_du);
  const Eigen::Matrix<double, 8, 8>& k0 = element.k0();
  for (int k = 0; k < n_elements; ++k) {
    const auto dofs = mesh.element_dofs(k);
    const Eigen::Matrix<double, 8, 1> uk = gather(u, dofs);
    const Eigen::Matrix<double, 8, 1> psik = gather(psi, dofs);
    grad[k] -= penalty * std::pow(rho.rho[k], penalty - 1.0) * psik.dot(k0 * uk);
  }
  return grad;
}

GradientBundle compute_gradients(const Mesh& mesh, const ElementStiffness& element,
                                 const DensityField& rho, double penalty,
                                 const Eigen::VectorXd& u, const StressField& stress,
                                 const std::vector<InelasticDomain>& domains,
                                 const FemSolver& solver,
                                 DissipationDiagnostics* diagnostics) {
  GradientBundle bundle;
  bundle.objective = objective_gradient(mesh, element, rho, penalty, u);
  bundle.mass = mass_gradient(mesh);
  bundle.dissipation.reserve(domains.size());
  for (const InelasticDomain& domain : domains)
    bundle.dissipation.push_back(dissipation_gradient(mesh, element, rho, penalty, u,
                                                      stress, domain, solver,
                                                      diagnostics));
  return bundle;
}

}  // namespace stm
