/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace stm {

namespace {

constexpr double kPivotDropRatio = 1e-12;
constexpr double kDirectionFlushRatio = 1e-12;

std::vector<const Eigen::VectorXd*> constraint_rows(const GradientBundle& bundle) {
  std::vector<const Eigen::VectorXd*> rows;
  rows.reserve(1 + bundle.dissipation.size());
  rows.push_back(&bundle.mass);
  for (const Eigen::VectorXd& g : bundle.dissipation) rows.push_back(&g);
  return rows;
}

/// Gram matrix and right-hand sides restricted to free elements.
Eigen::MatrixXd free_gram(const std::vector<const Eigen::VectorXd*>& rows,
                          const ActiveConstraintSet& active) {
  const int m = static_cast<int>(rows.size());
  const int n = active.element_count();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  for (int e = 0; e < n; ++e) {
    if (active.pinned(e)) continue;
    for (int k = 0; k < m; ++k) {
      const double hk = (*rows[k])[e];
      for (int l = 0; l <= k; ++l) gram(k, l) += hk * (*rows[l])[e];
    }
  }
  for (int k = 0; k < m; ++k)
    for (int l = k + 1; l < m; ++l) gram(k, l) = gram(l, k);
  return gram;
}

struct GramSolution {
  Eigen::VectorXd multipliers;  // zero on dropped rows
  std::vector<int> dropped;
};

/// Cholesky factorization built one constraint at a time; a row whose
/// pivot falls under the guard is dependent on the rows before it (or
/// empty on the free set) and is dropped rather than inverted.
GramSolution solve_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs) {
  const int m = static_cast<int>(gram.rows());
  const double guard = kPivotDropRatio * gram.cwiseAbs().maxCoeff();

  std::vector<int> kept;
  Eigen::MatrixXd lfac = Eigen::MatrixXd::Zero(m, m);

  GramSolution solution;
  for (int k = 0; k < m; ++k) {
    const int q = static_cast<int>(kept.size());
    Eigen::VectorXd row(q);
    for (int j = 0; j < q; ++j) {
      double s = gram(k, kept[j]);
      for (int t = 0; t < j; ++t) s -= row[t] * lfac(j, t);
      row[j] = s / lfac(j, j);
    }
    const double pivot = gram(k, k) - row.squaredNorm();
    if (pivot <= guard) {
      solution.dropped.push_back(k);
      continue;
    }
    for (int j = 0; j < q; ++j) lfac(q, j) = row[j];
    lfac(q, q) = std::sqrt(pivot);
    kept.push_back(k);
  }

  const int q = static_cast<int>(kept.size());
  Eigen::VectorXd y(q);
  for (int j = 0; j < q; ++j) {
    double s = rhs[kept[j]];
    for (int t = 0; t < j; ++t) s -= lfac(j, t) * y[t];
    y[j] = s / lfac(j, j);
  }
  Eigen::VectorXd z(q);
  for (int j = q - 1; j >= 0; --j) {
    double s = y[j];
    for (int t = j + 1; t < q; ++t) s -= lfac(t, j) * z[t];
    z[j] = s / lfac(j, j);
  }

  solution.multipliers = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < q; ++j) solution.multipliers[kept[j]] = z[j];
  return solution;
}

}  // namespace

std::vector<BoxPin> ActiveConstraintSet::pins() const {
  std::vector<BoxPin> out;
  out.reserve(pin_count_);
  for (int e = 0; e < element_count(); ++e)
    if (state_[e] != kFree)
      out.push_back({e, state_[e] == kLower ? Bound::kLower : Bound::kUpper});
  return out;
}

std::string constraint_name(int index) {
  if (index == 0) return "mass";
  char buf[48];
  std::snprintf(buf, sizeof buf, "dissipation domain %d", index - 1);
  return buf;
}

ProjectionResult project_gradient(const GradientBundle& bundle,
                                  const ActiveConstraintSet& active) {
  const auto rows = constraint_rows(bundle);
  const int m = static_cast<int>(rows.size());
  const int n = active.element_count();

  const Eigen::MatrixXd gram = free_gram(rows, active);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (int e = 0; e < n; ++e) {
    if (active.pinned(e)) continue;
    for (int k = 0; k < m; ++k) rhs[k] += (*rows[k])[e] * bundle.objective[e];
  }

  const GramSolution sol = solve_gram(gram, rhs);

  ProjectionResult result;
  result.dropped = sol.dropped;
  result.lambda_mass = sol.multipliers[0];
  result.lambda_domains.assign(sol.multipliers.data() + 1, sol.multipliers.data() + m);

  result.direction = Eigen::VectorXd::Zero(n);
  result.box_multipliers = Eigen::VectorXd::Zero(n);
  for (int e = 0; e < n; ++e) {
    double d = -bundle.objective[e];
    for (int k = 0; k < m; ++k) d += sol.multipliers[k] * (*rows[k])[e];
    if (active.pinned(e))
      result.box_multipliers[e] = d;
    else
      result.direction[e] = d;
  }

  // Below the rounding noise of the gradient evaluation the projected
  // direction is a converged zero, typically because the pins leave no
  // tangent space; the residue carries no signal and its orthogonality
  // ratios are meaningless.
  double objective_scale = 0.0;
  for (int e = 0; e < n; ++e)
    if (!active.pinned(e))
      objective_scale = std::max(objective_scale, std::abs(bundle.objective[e]));
  if (result.direction.lpNorm<Eigen::Infinity>() <=
      kDirectionFlushRatio * objective_scale)
    result.direction.setZero();

  const double dir_norm = result.direction.norm();
  result.orthogonality.resize(m, 0.0);
  for (int k = 0; k < m; ++k) {
    const double denom = dir_norm * rows[k]->norm();
    if (denom > 0.0)
      result.orthogonality[k] = std::abs(result.direction.dot(*rows[k])) / denom;
    result.max_orthogonality = std::max(result.max_orthogonality,
                                        result.orthogonality[k]);
  }
  return result;
}

Eigen::VectorXd restoration_correction(const GradientBundle& bundle,
                                       const ActiveConstraintSet& active,
                                       const std::vector<double>& residuals) {
  const auto rows = constraint_rows(bundle);
  const int m = static_cast<int>(rows.size());
  const int n = active.element_count();

  Eigen::VectorXd rhs(m);
  for (int k = 0; k < m; ++k) rhs[k] = -residuals[k];

  const GramSolution sol = solve_gram(free_gram(rows, active), rhs);

  Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
  for (int e = 0; e < n; ++e) {
    if (active.pinned(e)) continue;
    for (int k = 0; k < m; ++k) delta[e] += sol.multipliers[k] * (*rows[k])[e];
  }
  return delta;
}

}  // namespace stm
