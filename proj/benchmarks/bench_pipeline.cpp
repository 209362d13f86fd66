/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include <benchmark/benchmark.h>

#include "stm/fem.hpp"
#include "stm/fields.hpp"
#include "stm/mesh.hpp"
#include "stm/optimizer.hpp"
#include "stm/sensitivity.hpp"

namespace {

stm::ProblemDefinition beam_problem(int n) {
  stm::ProblemDefinition pd;
  pd.nx = n;
  pd.ny = n;
  pd.mass_fraction = 0.3;
  pd.tensile_strength = {stm::StrengthMode::kScaledToInitialMax, 0.7};

  stm::SupportSpec top;
  top.at.kind = stm::SelectorKind::kEdge;
  top.at.edge = stm::EdgeName::kTop;
  top.fix_x = true;
  top.fix_y = true;
  pd.supports = {top};

  stm::LoadSpec pull;
  pull.at.kind = stm::SelectorKind::kEdge;
  pull.at.edge = stm::EdgeName::kBottom;
  pull.fy = -1.0;
  pd.loads = {pull};
  return pd;
}

void BM_ElementStiffness(benchmark::State& state) {
  for (auto _ : state) {
    stm::ElementStiffness element(1.0, 0.2, 1.0, 1.0);
    benchmark::DoNotOptimize(element);
  }
}
BENCHMARK(BM_ElementStiffness);

void BM_Factorize(benchmark::State& state) {
  const stm::ProblemDefinition pd = beam_problem(static_cast<int>(state.range(0)));
  const stm::Mesh mesh = stm::build_mesh(pd);
  const stm::ElementStiffness element(pd.young_modulus, pd.poisson_ratio,
                                      pd.element_size, pd.thickness);
  stm::FemSolver solver(mesh, element);
  const stm::DensityField rho = stm::init_density(pd, mesh);
  solver.factorize(rho, pd.penalty);

  for (auto _ : state) {
    solver.factorize(rho, pd.penalty);
    benchmark::DoNotOptimize(solver);
  }
}
BENCHMARK(BM_Factorize)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_FullIteration(benchmark::State& state) {
  const stm::ProblemDefinition pd = beam_problem(static_cast<int>(state.range(0)));
  const stm::Mesh mesh = stm::build_mesh(pd);
  const stm::ElementStiffness element(pd.young_modulus, pd.poisson_ratio,
                                      pd.element_size, pd.thickness);
  stm::FemSolver solver(mesh, element);
  const Eigen::VectorXd load = mesh.load_vector();
  const stm::DensityField rho = stm::init_density(pd, mesh);

  solver.factorize(rho, pd.penalty);
  const Eigen::VectorXd u0 = solver.solve(load);
  const stm::StressField stress0 =
      stm::recover_stresses(mesh, element, rho, u0, pd.penalty);
  const double threshold = stm::resolve_tensile_strength(
      pd.tensile_strength, stress0.max_principal());
  const std::vector<stm::InelasticDomain> domains =
      stm::detect_inelastic_domains(stress0, threshold, mesh, pd.detection_rule);
  const stm::ActiveConstraintSet base_set(mesh.element_count());

  stm::UpdateStepOptions options;
  options.gamma = pd.step;
  options.target_mass = mesh.target_mass(pd.mass_fraction, pd.rho_min);
  options.rho_min = pd.rho_min;

  for (auto _ : state) {
    solver.factorize(rho, pd.penalty);
    const Eigen::VectorXd u = solver.solve(load);
    const stm::StressField stress =
        stm::recover_stresses(mesh, element, rho, u, pd.penalty);
    const stm::GradientBundle bundle = stm::compute_gradients(
        mesh, element, rho, pd.penalty, u, stress, domains, solver);
    stm::ActiveConstraintSet active = base_set;
    const stm::UpdateOutcome out =
        stm::update_step(rho, bundle, active, mesh, options);
    benchmark::DoNotOptimize(out.next.rho);
  }
}
BENCHMARK(BM_FullIteration)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
