/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/element.hpp"

#include <cmath>

namespace stm {

const std::array<GaussPoint, 4>& gauss_points_2x2() {
  static const double g = 1.0 / std::sqrt(3.0);
  static const std::array<GaussPoint, 4> points = {
      GaussPoint{-g, -g}, GaussPoint{g, -g}, GaussPoint{g, g}, GaussPoint{-g, g}};
  return points;
}

ElementStiffness::ElementStiffness(double young_modulus, double poisson_ratio,
                                   double size, double thickness)
    : size_(size), thickness_(thickness) {
  const double e = young_modulus;
  const double nu = poisson_ratio;
  d0_ << 1.0, nu, 0.0,
         nu, 1.0, 0.0,
         0.0, 0.0, (1.0 - nu) / 2.0;
  d0_ *= e / (1.0 - nu * nu);

  // k0 = t * sum_i B_i^T D B_i det J  (2x2 Gauss, unit weights)
  k0_.setZero();
  for (const GaussPoint& gp : gauss_points_2x2()) {
    const Eigen::Matrix<double, 3, 8> b = strain_displacement(gp.xi, gp.eta);
    k0_ += thickness_ * det_jacobian() * b.transpose() * d0_ * b;
  }
}

Eigen::Matrix<double, 3, 8> ElementStiffness::strain_displacement(double xi,
                                                                 double eta) const {
  // Bilinear shape function derivatives on [-1,1]^2, nodes counter-clockwise
  // from the bottom-left corner; dN/dx = (2/a) dN/dxi for the square map.
  const double dxi[4] = {-(1.0 - eta) / 4.0, (1.0 - eta) / 4.0, (1.0 + eta) / 4.0,
                         -(1.0 + eta) / 4.0};
  const double deta[4] = {-(1.0 - xi) / 4.0, -(1.0 + xi) / 4.0, (1.0 + xi) / 4.0,
                          (1.0 - xi) / 4.0};
  const double scale = 2.0 / size_;

  Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
  for (int n = 0; n < 4; ++n) {
    const double dx = scale * dxi[n];
    const double dy = scale * deta[n];
    b(0, 2 * n) = dx;
    b(1, 2 * n + 1) = dy;
    b(2, 2 * n) = dy;
    b(2, 2 * n + 1) = dx;
  }
  return b;
}

}  // namespace stm
