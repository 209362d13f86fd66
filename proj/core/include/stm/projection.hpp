/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_PROJECTION_HPP
#define STM_PROJECTION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stm/sensitivity.hpp"

namespace stm {

enum class Bound : std::uint8_t { kLower, kUpper };

struct BoxPin {
  int element = 0;
  Bound bound = Bound::kLower;
};

/// Elements currently held on a density bound. Pinned elements take no
/// part in the projected direction; the projection reports the direction
/// each one would take if freed, which drives the release rule.
class ActiveConstraintSet {
 public:
  ActiveConstraintSet() = default;
  explicit ActiveConstraintSet(int element_count)
      : state_(element_count, kFree) {}

  int element_count() const { return static_cast<int>(state_.size()); }
  int pin_count() const { return pin_count_; }

  bool pinned(int e) const { return state_[e] != kFree; }
  Bound bound(int e) const {
    return state_[e] == kLower ? Bound::kLower : Bound::kUpper;
  }

  void pin(int e, Bound b) {
    if (state_[e] == kFree) ++pin_count_;
    state_[e] = (b == Bound::kLower) ? kLower : kUpper;
  }

  void release(int e) {
    if (state_[e] != kFree) --pin_count_;
    state_[e] = kFree;
  }

  /// Pins in ascending element order.
  std::vector<BoxPin> pins() const;

  friend bool operator==(const ActiveConstraintSet&,
                         const ActiveConstraintSet&) = default;

 private:
  static constexpr std::uint8_t kFree = 0;
  static constexpr std::uint8_t kLower = 1;
  static constexpr std::uint8_t kUpper = 2;

  std::vector<std::uint8_t> state_;
  int pin_count_ = 0;
};

/// Steepest-descent direction projected onto the tangent space of the
/// equality constraints with pinned elements eliminated.
struct ProjectionResult {
  /// Search direction; exactly zero on pinned elements, and flushed to
  /// an exact zero vector when it falls below the rounding noise of the
  /// objective gradient.
  Eigen::VectorXd direction;

  double lambda_mass = 0.0;
  std::vector<double> lambda_domains;

  /// For pinned elements, the direction that element would take if it
  /// were released; zero on free elements. A lower-bound pin wanting to
  /// move up (positive entry) no longer needs the pin.
  Eigen::VectorXd box_multipliers;

  /// Equality constraints eliminated by the rank guard: 0 is the mass
  /// constraint, 1 + d is dissipation domain d. Their multipliers are
  /// zero and the direction ignores them.
  std::vector<int> dropped;

  /// Per-constraint |direction . grad h| / (|direction| |grad h|), same
  /// indexing as dropped; zero when either norm vanishes.
  std::vector<double> orthogonality;
  double max_orthogonality = 0.0;
};

/// Human-readable name for a constraint index in the projection ordering.
std::string constraint_name(int index);

/// Projects -grad f onto the null space of the equality constraint
/// gradients restricted to free elements. Multipliers come from the small
/// Gram system of the constraint gradients; rank-deficient rows are
/// dropped by a pivot guard during the Cholesky factorization.
ProjectionResult project_gradient(const GradientBundle& bundle,
                                  const ActiveConstraintSet& active);

/// Minimal-norm density change over the free elements that cancels the
/// given equality constraint residuals to first order. residuals[0] is
/// the mass residual, residuals[1 + d] the dissipation drift of domain d.
Eigen::VectorXd restoration_correction(const GradientBundle& bundle,
                                       const ActiveConstraintSet& active,
                                       const std::vector<double>& residuals);

}  // namespace stm

#endif  // STM_PROJECTION_HPP
