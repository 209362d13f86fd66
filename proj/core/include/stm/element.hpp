/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_ELEMENT_HPP
#define STM_ELEMENT_HPP

#include <array>

#include <Eigen/Core>

namespace stm {

/// One Gauss point of the 2x2 rule in reference coordinates; all weights
/// are one.
struct GaussPoint {
  double xi;
  double eta;
};

/// Four-point rule, ordered counter-clockwise starting at (-g, -g).
const std::array<GaussPoint, 4>& gauss_points_2x2();

/// Unpenalized stiffness of the square bilinear plane-stress element,
/// with its constitutive matrix and strain-displacement evaluator. All
/// elements of a structured grid share one instance.
class ElementStiffness {
 public:
  ElementStiffness(double young_modulus, double poisson_ratio, double size,
                   double thickness);

  const Eigen::Matrix<double, 8, 8>& k0() const { return k0_; }
  const Eigen::Matrix3d& d0() const { return d0_; }

  /// B(xi, eta): strains (exx, eyy, gxy) = B * element displacements.
  Eigen::Matrix<double, 3, 8> strain_displacement(double xi, double eta) const;

  /// Jacobian determinant of the reference-to-physical map (constant).
  double det_jacobian() const { return 0.25 * size_ * size_; }

  double size() const { return size_; }
  double thickness() const { return thickness_; }

 private:
  double size_;
  double thickness_;
  Eigen::Matrix3d d0_;
  Eigen::Matrix<double, 8, 8> k0_;
};

}  // namespace stm

#endif  // STM_ELEMENT_HPP
