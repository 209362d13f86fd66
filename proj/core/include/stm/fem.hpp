/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_FEM_HPP
#define STM_FEM_HPP

#include <vector>

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "stm/element.hpp"
#include "stm/fields.hpp"
#include "stm/mesh.hpp"

namespace stm {

/// Largest eigenvalue of the plane stress tensor:
///   s1 = (sxx + syy)/2 + sqrt(((sxx - syy)/2)^2 + sxy^2).
double principal_stress_max(double sxx, double syy, double sxy);

/// Sparse symmetric solver for K(rho) u = p with supports eliminated.
/// The factorization of one iteration is reused for the displacement
/// solve and for every adjoint solve of that iteration.
class FemSolver {
 public:
  FemSolver(const Mesh& mesh, const ElementStiffness& element);

  /// Assembles K = sum_e rho_e^p k0 on free dofs and factorizes.
  /// Throws SolveError when the reduced system is singular or indefinite
  /// (insufficient supports).
  void factorize(const DensityField& rho, double penalty);

  /// Solves K u = rhs for a full-length right-hand side; entries on fixed
  /// dofs are ignored on input and zero on output. Iterative refinement
  /// brings the relative residual below 1e-12 (hard failure above 1e-10).
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs_full) const;

  /// u^T K u over the free dofs of the current factorized matrix.
  double quadratic_form(const Eigen::VectorXd& u_full) const;

  bool factorized() const { return factorized_; }
  int free_dof_count() const { return static_cast<int>(free_to_full_.size()); }
  const Mesh& mesh() const { return *mesh_; }
  const ElementStiffness& element() const { return *element_; }

 private:
  const Mesh* mesh_;
  const ElementStiffness* element_;
  std::vector<int> full_to_free_;  // -1 for fixed dofs
  std::vector<int> free_to_full_;
  Eigen::SparseMatrix<double> k_reduced_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  bool pattern_analyzed_ = false;
  bool factorized_ = false;

  Eigen::VectorXd reduce(const Eigen::VectorXd& full) const;
  Eigen::VectorXd expand(const Eigen::VectorXd& red) const;
};

/// Convenience wrapper: builds a solver, factorizes, and solves for the
/// mesh loads in one call.
Eigen::VectorXd assemble_and_solve(const Mesh& mesh, const ElementStiffness& element,
                                   const DensityField& rho, double penalty);

/// Penalized Gauss point stresses sigma = rho_e^p D0 B u_e with the first
/// principal stress attached.
StressField recover_stresses(const Mesh& mesh, const ElementStiffness& element,
                             const DensityField& rho, const Eigen::VectorXd& u,
                             double penalty);

/// Compliance u^T p; equals u^T K u at equilibrium.
double compliance(const Eigen::VectorXd& u, const Eigen::VectorXd& load);

/// Dissipation rate of one domain: sum over member elements and Gauss
/// points of s1 * det J (unit flow multiplier).
double dissipation_rate(const StressField& stress, const InelasticDomain& domain,
                        double det_jacobian);

}  // namespace stm

#endif  // STM_FEM_HPP
