/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/fem.hpp"

#include <cmath>
#include <string>

#include "stm/errors.hpp"

namespace stm {

double principal_stress_max(double sxx, double syy, double sxy) {
  const double center = 0.5 * (sxx + syy);
  const double half_diff = 0.5 * (sxx - syy);
  return center + std::hypot(half_diff, sxy);
}

FemSolver::FemSolver(const Mesh& mesh, const ElementStiffness& element)
    : mesh_(&mesh), element_(&element) {
  const auto fixed = mesh.fixed_dof_mask();
  full_to_free_.assign(mesh.dof_count(), -1);
  for (int dof = 0; dof < mesh.dof_count(); ++dof) {
    if (!fixed[dof]) {
      full_to_free_[dof] = static_cast<int>(free_to_full_.size());
      free_to_full_.push_back(dof);
    }
  }
  if (free_to_full_.empty())
    throw SolveError("all degrees of freedom are fixed; nothing to solve");
}

void FemSolver::factorize(const DensityField& rho, double penalty) {
  const int n_free = free_dof_count();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh_->element_count()) * 64);

  const Eigen::Matrix<double, 8, 8>& k0 = element_->k0();
  for (int e = 0; e < mesh_->element_count(); ++e) {
    const double scale = std::pow(rho.rho[e], penalty);
    const auto dofs = mesh_->element_dofs(e);
    for (int a = 0; a < 8; ++a) {
      const int ra = full_to_free_[dofs[a]];
      if (ra < 0) continue;
      for (int b = 0; b < 8; ++b) {
        const int rb = full_to_free_[dofs[b]];
        if (rb < 0) continue;
        triplets.emplace_back(ra, rb, scale * k0(a, b));
      }
    }
  }

  k_reduced_.resize(n_free, n_free);
  k_reduced_.setFromTriplets(triplets.begin(), triplets.end());
  k_reduced_.makeCompressed();

  if (!pattern_analyzed_) {
    ldlt_.analyzePattern(k_reduced_);
    pattern_analyzed_ = true;
  }
  ldlt_.factorize(k_reduced_);
  if (ldlt_.info() != Eigen::Success)
    throw SolveError(
        "stiffness factorization failed: system is singular "
        "(supports do not eliminate all rigid-body modes?)");

  // An SPD matrix factors with strictly positive D; anything else means
  // the supports leave a zero-energy mode.
  const auto& d = ldlt_.vectorD();
  const double d_max = d.maxCoeff();
  if (!(d_max > 0.0) || d.minCoeff() <= 1e-14 * d_max)
    throw SolveError(
        "stiffness matrix is not positive definite: insufficient supports "
        "leave a rigid-body or zero-energy mode");
  factorized_ = true;
}

Eigen::VectorXd FemSolver::reduce(const Eigen::VectorXd& full) const {
  Eigen::VectorXd red(free_dof_count());
  for (int i = 0; i < free_dof_count(); ++i) red[i] = full[free_to_full_[i]];
  return red;
}

Eigen::VectorXd FemSolver::expand(const Eigen::VectorXd& red) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(mesh_->dof_count());
  for (int i = 0; i < free_dof_count(); ++i) full[free_to_full_[i]] = red[i];
  return full;
}

Eigen::VectorXd FemSolver::solve(const Eigen::VectorXd& rhs_full) const {
  if (!factorized_) throw SolveError("solve called before factorize");
  const Eigen::VectorXd b = reduce(rhs_full);
  const double b_norm = b.norm();
  Eigen::VectorXd x = ldlt_.solve(b);

  // One or two refinement passes keep the residual near round-off even at
  // the 1e-9 stiffness contrast of fully penalized void elements.
  double res_norm = 0.0;
  for (int pass = 0; pass < 3; ++pass) {
    const Eigen::VectorXd r = b - k_reduced_ * x;
    res_norm = r.norm();
    if (b_norm == 0.0 || res_norm <= 1e-12 * b_norm) break;
    x += ldlt_.solve(r);
  }
  if (b_norm > 0.0 && res_norm > 1e-10 * b_norm)
    throw SolveError("linear solve residual " + std::to_string(res_norm / b_norm) +
                     " exceeds 1e-10 of the load norm");
  return expand(x);
}

double FemSolver::quadratic_form(const Eigen::VectorXd& u_full) const {
  if (!factorized_) throw SolveError("quadratic_form called before factorize");
  const Eigen::VectorXd u = reduce(u_full);
  return u.dot(k_reduced_ * u);
}

Eigen::VectorXd assemble_and_solve(const Mesh& mesh, const ElementStiffness& element,
                                   const DensityField& rho, double penalty) {
  FemSolver solver(mesh, element);
  solver.factorize(rho, penalty);
  return solver.solve(mesh.load_vector());
}

StressField recover_stresses(const Mesh& mesh, const ElementStiffness& element,
                             const DensityField& rho, const Eigen::VectorXd& u,
                             double penalty) {
  StressField field;
  field.elements.resize(mesh.element_count());
  const auto& gauss = gauss_points_2x2();

  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto dofs = mesh.element_dofs(e);
    Eigen::Matrix<double, 8, 1> ue;
    for (int a = 0; a < 8; ++a) ue[a] = u[dofs[a]];
    const double scale = std::pow(rho.rho[e], penalty);

    for (int i = 0; i < 4; ++i) {
      const Eigen::Matrix<double, 3, 8> b =
          element.strain_displacement(gauss[i].xi, gauss[i].eta);
      const Eigen::Vector3d sigma = scale * (element.d0() * (b * ue));
      GaussPointStress& gp = field.elements[e][i];
      gp.sxx = sigma[0];
      gp.syy = sigma[1];
      gp.sxy = sigma[2];
      gp.s1 = principal_stress_max(gp.sxx, gp.syy, gp.sxy);
    }
  }
  return field;
}

double compliance(const Eigen::VectorXd& u, const Eigen::VectorXd& load) {
  return u.dot(load);
}

double dissipation_rate(const StressField& stress, const InelasticDomain& domain,
                        double det_jacobian) {
  double rate = 0.0;
  for (int e : domain.elements)
    for (const GaussPointStress& gp : stress.elements[e]) rate += gp.s1;
  return rate * det_jacobian;
}

}  // namespace stm
