/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "stm/errors.hpp"

namespace stm {

double resolve_tensile_strength(const TensileStrength& strength,
                                double initial_max_principal) {
  if (strength.mode == StrengthMode::kAbsolute) return strength.value;
  return strength.value * initial_max_principal;
}

namespace {

bool exceeds_threshold(const std::array<GaussPointStress, 4>& gps, double threshold,
                       DetectionRule rule) {
  if (rule == DetectionRule::kAnyGaussPoint) {
    for (const GaussPointStress& gp : gps)
      if (gp.s1 > threshold) return true;
    return false;
  }
  double sum = 0.0;
  for (const GaussPointStress& gp : gps) sum += gp.s1;
  return 0.25 * sum > threshold;
}

}  // namespace

std::vector<InelasticDomain> detect_inelastic_domains(const StressField& stress,
                                                      double threshold,
                                                      const Mesh& mesh,
                                                      DetectionRule rule) {
  const int n = mesh.element_count();
  std::vector<char> hot(n, 0);
  for (int e = 0; e < n; ++e)
    hot[e] = exceeds_threshold(stress.elements[e], threshold, rule) ? 1 : 0;

  std::vector<int> label(n, -1);
  std::vector<InelasticDomain> domains;
  std::vector<int> queue;
  for (int seed = 0; seed < n; ++seed) {
    if (!hot[seed] || label[seed] >= 0) continue;
    InelasticDomain domain;
    domain.id = static_cast<int>(domains.size());
    queue.assign(1, seed);
    label[seed] = domain.id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int e = queue[head];
      domain.elements.push_back(e);
      const int ex = e % mesh.nx;
      const int ey = e / mesh.nx;
      const int neighbors[4] = {ex > 0 ? e - 1 : -1,
                                ex + 1 < mesh.nx ? e + 1 : -1,
                                ey > 0 ? e - mesh.nx : -1,
                                ey + 1 < mesh.ny ? e + mesh.nx : -1};
      for (int nb : neighbors) {
        if (nb < 0 || !hot[nb] || label[nb] >= 0) continue;
        label[nb] = domain.id;
        queue.push_back(nb);
      }
    }
    std::sort(domain.elements.begin(), domain.elements.end());
    domain.reference_rate = dissipation_rate(stress, domain, mesh.det_jacobian());
    if (domain.reference_rate <= 0.0)
      throw SolveError("inelastic domain " + std::to_string(domain.id) +
                       " has a nonpositive reference dissipation rate");
    domains.push_back(std::move(domain));
  }
  return domains;
}

UpdateOutcome update_step(const DensityField& rho, const GradientBundle& bundle,
                          ActiveConstraintSet& active, const Mesh& mesh,
                          const UpdateStepOptions& options) {
  const int n = mesh.element_count();
  const double volume = mesh.element_volume();
  const int max_rounds = options.max_rounds > 0 ? options.max_rounds : n + 8;

  ProjectionResult proj = project_gradient(bundle, active);

  if (options.release_pinned) {
    bool released = false;
    for (const BoxPin& pin : active.pins()) {
      if (mesh.is_passive(pin.element)) continue;
      const double would_move = proj.box_multipliers[pin.element];
      if ((pin.bound == Bound::kLower && would_move > 0.0) ||
          (pin.bound == Bound::kUpper && would_move < 0.0)) {
        active.release(pin.element);
        released = true;
      }
    }
    if (released) proj = project_gradient(bundle, active);
  }

  UpdateOutcome out;
  Eigen::VectorXd trial(n);
  int round = 0;
  for (;; ++round) {
    if (round >= max_rounds)
      throw SolveError("bound projection failed to settle after " +
                       std::to_string(round) + " rounds");

    trial = rho.rho;
    for (const BoxPin& pin : active.pins())
      trial[pin.element] = (pin.bound == Bound::kLower) ? options.rho_min : 1.0;

    Eigen::VectorXd move = Eigen::VectorXd::Zero(n);
    const double dir_norm = proj.direction.lpNorm<Eigen::Infinity>();
    if (dir_norm > 0.0) move = (options.gamma / dir_norm) * proj.direction;
    if (options.restoration_residuals)
      move += restoration_correction(bundle, active, *options.restoration_residuals);

    double pinned_mass = 0.0;
    double free_mass = 0.0;
    double free_quadrature = 0.0;
    for (int e = 0; e < n; ++e) {
      if (active.pinned(e)) {
        pinned_mass += trial[e] * volume;
      } else {
        free_mass += (trial[e] + move[e]) * volume;
        free_quadrature += volume * volume;
      }
    }

    if (free_quadrature == 0.0) {
      if (std::abs(options.target_mass - pinned_mass) >
          1e-9 * std::max(1.0, options.target_mass))
        throw SolveError("every element is pinned on a bound and the mass "
                         "budget is unreachable");
      break;
    }

    const double shift =
        (options.target_mass - pinned_mass - free_mass) / free_quadrature;
    for (int e = 0; e < n; ++e)
      if (!active.pinned(e)) trial[e] += move[e] + shift * volume;

    bool pinned_any = false;
    for (int e = 0; e < n; ++e) {
      if (active.pinned(e)) continue;
      if (trial[e] < options.rho_min) {
        active.pin(e, Bound::kLower);
        trial[e] = options.rho_min;
        pinned_any = true;
      } else if (trial[e] > 1.0) {
        active.pin(e, Bound::kUpper);
        trial[e] = 1.0;
        pinned_any = true;
      }
    }
    if (!pinned_any) break;
    proj = project_gradient(bundle, active);
  }

  out.step_norm_inf = proj.direction.lpNorm<Eigen::Infinity>();
  for (int k : proj.dropped)
    out.warnings.push_back(constraint_name(k) +
                           " constraint dropped from the projection");
  out.projection = std::move(proj);
  out.next.rho = std::move(trial);
  out.rounds = round + 1;
  return out;
}

std::string stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxIterations:
      return "max_iterations";
    case StopReason::kStepTolerance:
      return "step_tolerance";
    case StopReason::kObjectiveTolerance:
      return "objective_tolerance";
  }
  return "unknown";
}

OptimizationResult run_optimization(const ProblemDefinition& pd,
                                    const IterationObserver& observer) {
  const Mesh mesh = build_mesh(pd);
  const ElementStiffness element(pd.young_modulus, pd.poisson_ratio,
                                 pd.element_size, pd.thickness);
  FemSolver solver(mesh, element);
  const Eigen::VectorXd load = mesh.load_vector();
  const double target = mesh.target_mass(pd.mass_fraction, pd.rho_min);

  DensityField rho = init_density(pd, mesh);
  ActiveConstraintSet active(mesh.element_count());
  for (int e : mesh.passive_elements) active.pin(e, Bound::kLower);

  OptimizationResult result;
  result.problem = pd;

  std::set<std::string> seen_warnings;
  const auto warn_once = [&](int iteration, const std::string& body) {
    if (!seen_warnings.insert(body).second) return;
    result.warnings.push_back("iteration " + std::to_string(iteration) + ": " + body);
  };

  for (int n = 0;; ++n) {
    try {
      solver.factorize(rho, pd.penalty);
      const Eigen::VectorXd u = solver.solve(load);
      const StressField stress =
          recover_stresses(mesh, element, rho, u, pd.penalty);

      if (n == 0) {
        result.resolved_tensile_strength = resolve_tensile_strength(
            pd.tensile_strength, stress.max_principal());
        result.domains = detect_inelastic_domains(
            stress, result.resolved_tensile_strength, mesh, pd.detection_rule);
      }

      DissipationDiagnostics diagnostics;
      const GradientBundle bundle =
          compute_gradients(mesh, element, rho, pd.penalty, u, stress,
                            result.domains, solver, &diagnostics);
      if (!diagnostics.near_degenerate_elements.empty())
        warn_once(n, "principal stress nearly degenerate at " +
                         std::to_string(diagnostics.near_degenerate_elements.size()) +
                         " constraint evaluation point(s)");

      HistoryRecord record;
      record.iteration = n;
      record.objective = compliance(u, load);
      record.mass_residual = (rho.mass(mesh) - target) / target;
      record.dissipation.resize(result.domains.size());
      record.drift.resize(result.domains.size());
      std::vector<double> residuals(1 + result.domains.size());
      residuals[0] = rho.mass(mesh) - target;
      for (std::size_t d = 0; d < result.domains.size(); ++d) {
        const double reference = result.domains[d].reference_rate;
        record.dissipation[d] =
            dissipation_rate(stress, result.domains[d], mesh.det_jacobian());
        record.drift[d] = (record.dissipation[d] - reference) / reference;
        residuals[1 + d] = record.dissipation[d] - reference;
      }

      UpdateStepOptions opts;
      opts.gamma = pd.step;
      opts.target_mass = target;
      opts.rho_min = pd.rho_min;
      opts.release_pinned = pd.release_pinned;
      const bool restore = pd.restoration_period > 0 && n > 0 &&
                           n % pd.restoration_period == 0;
      if (restore) opts.restoration_residuals = &residuals;

      UpdateOutcome update = update_step(rho, bundle, active, mesh, opts);
      for (const std::string& body : update.warnings) warn_once(n, body);

      record.active_box_count = active.pin_count();
      record.step_norm_inf = update.step_norm_inf;
      result.history.push_back(record);

      if (observer) {
        OptimizationState state;
        state.iteration = n;
        state.mesh = &mesh;
        state.density = &rho;
        state.displacements = &u;
        state.stress = &stress;
        state.gradients = &bundle;
        state.projection = &update.projection;
        state.record = &result.history.back();
        observer(state);
      }

      bool done = false;
      if (n >= pd.max_iterations) {
        result.stop = StopReason::kMaxIterations;
        done = true;
      } else if (update.step_norm_inf < pd.tolerances.step) {
        result.stop = StopReason::kStepTolerance;
        done = true;
      } else if (n >= 10) {
        const double f_old = result.history[n - 10].objective;
        const double denom =
            std::max({std::abs(f_old), std::abs(record.objective), 1e-30});
        if (std::abs(record.objective - f_old) < pd.tolerances.objective * denom) {
          result.stop = StopReason::kObjectiveTolerance;
          done = true;
        }
      }

      if (done) {
        result.final_density = rho;
        result.final_displacements = u;
        result.final_stresses = stress;
        result.final_objective = record.objective;
        break;
      }
      rho = std::move(update.next);
    } catch (const SolveError& err) {
      throw SolveError("iteration " + std::to_string(n) + ": " + err.what());
    }
  }
  return result;
}

}  // namespace stm
