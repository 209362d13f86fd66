/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_OPTIMIZER_HPP
#define STM_OPTIMIZER_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stm/fem.hpp"
#include "stm/fields.hpp"
#include "stm/mesh.hpp"
#include "stm/problem.hpp"
#include "stm/projection.hpp"
#include "stm/sensitivity.hpp"

namespace stm {

/// Threshold actually used for domain detection; scaled modes are
/// resolved against the largest initial principal stress.
double resolve_tensile_strength(const TensileStrength& strength,
                                double initial_max_principal);

/// Marks elements whose principal stress exceeds the threshold under the
/// given rule, groups them into edge-connected components in element scan
/// order, and freezes each component's dissipation rate as its reference.
std::vector<InelasticDomain> detect_inelastic_domains(const StressField& stress,
                                                      double threshold,
                                                      const Mesh& mesh,
                                                      DetectionRule rule);

struct UpdateStepOptions {
  double gamma = 0.05;
  double target_mass = 0.0;
  double rho_min = 1e-3;
  bool release_pinned = true;

  /// When set, a first-order correction toward zero residuals is added to
  /// the trial step; residuals[0] is mass, residuals[1 + d] domain d.
  const std::vector<double>* restoration_residuals = nullptr;

  /// Rounds of the pin-and-reproject loop before giving up; zero picks
  /// element_count + 8, enough for every element to pin once.
  int max_rounds = 0;
};

struct UpdateOutcome {
  DensityField next;

  /// Projection the applied step was built from (after releases and with
  /// the settled pin set).
  ProjectionResult projection;

  /// Sup norm of the unscaled projected direction.
  double step_norm_inf = 0.0;

  int rounds = 0;
  std::vector<std::string> warnings;
};

/// One density update: release pins whose multiplier points back inside,
/// then repeat {project, step gamma along the sup-normalized direction,
/// restore the mass budget through a uniform volume-weighted shift, pin
/// bound crossers} until the pin set stops changing. Throws SolveError if
/// the set never settles or the budget becomes unreachable.
UpdateOutcome update_step(const DensityField& rho, const GradientBundle& bundle,
                          ActiveConstraintSet& active, const Mesh& mesh,
                          const UpdateStepOptions& options);

enum class StopReason { kMaxIterations, kStepTolerance, kObjectiveTolerance };

std::string stop_reason_name(StopReason reason);

/// One history row per optimizer iteration, including the final recorded
/// iteration whose update is not applied.
struct HistoryRecord {
  int iteration = 0;
  double objective = 0.0;
  double mass_residual = 0.0;        // (mass - budget) / budget, signed
  std::vector<double> dissipation;   // current rate per domain
  std::vector<double> drift;         // (rate - reference) / reference
  int active_box_count = 0;
  double step_norm_inf = 0.0;
};

/// Read-only view of one iteration handed to the observer after the row
/// is recorded and before the update is applied.
struct OptimizationState {
  int iteration = 0;
  const Mesh* mesh = nullptr;
  const DensityField* density = nullptr;
  const Eigen::VectorXd* displacements = nullptr;
  const StressField* stress = nullptr;
  const GradientBundle* gradients = nullptr;
  const ProjectionResult* projection = nullptr;
  const HistoryRecord* record = nullptr;
};

using IterationObserver = std::function<void(const OptimizationState&)>;

struct OptimizationResult {
  ProblemDefinition problem;
  double resolved_tensile_strength = 0.0;
  std::vector<InelasticDomain> domains;

  DensityField final_density;
  Eigen::VectorXd final_displacements;
  StressField final_stresses;
  double final_objective = 0.0;

  StopReason stop = StopReason::kMaxIterations;
  std::vector<HistoryRecord> history;
  std::vector<std::string> warnings;
};

/// Runs the full generation loop for one problem. Iteration n solves the
/// equilibrium system at the current densities, recovers stresses,
/// detects domains once at n == 0, computes gradients, builds the update,
/// records history row n, then either stops or applies the update. A run
/// capped at max_iterations applies exactly that many updates and records
/// max_iterations + 1 rows.
OptimizationResult run_optimization(const ProblemDefinition& pd,
                                    const IterationObserver& observer = {});

}  // namespace stm

#endif  // STM_OPTIMIZER_HPP
