/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

#include "stm/fem.hpp"
#include "stm/fields.hpp"
#include "stm/mesh.hpp"
#include "stm/optimizer.hpp"
#include "stm/sensitivity.hpp"

namespace stm {

namespace {

void record_probe(GradientFamilyReport& family, int element, double analytic,
                  double fd, double scale) {
  GradientProbe probe;
  probe.element = element;
  probe.analytic = analytic;
  probe.finite_difference = fd;
  const double diff = std::abs(fd - analytic);
  const double denom = std::max(std::abs(fd), 1e-12 * scale);
  if (denom > 0.0)
    probe.relative_error = diff / denom;
  else
    probe.relative_error =
        diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  family.max_relative_error =
      std::max(family.max_relative_error, probe.relative_error);
  family.probes.push_back(probe);
}

}  // namespace

GradientCheckReport check_gradients(const ProblemDefinition& pd, int probe_count,
                                    std::uint32_t seed) {
  const Mesh mesh = build_mesh(pd);
  const ElementStiffness element(pd.young_modulus, pd.poisson_ratio,
                                 pd.element_size, pd.thickness);
  FemSolver solver(mesh, element);
  const Eigen::VectorXd load = mesh.load_vector();
  const DensityField rho = init_density(pd, mesh);

  solver.factorize(rho, pd.penalty);
  const Eigen::VectorXd u = solver.solve(load);
  const StressField stress = recover_stresses(mesh, element, rho, u, pd.penalty);
  const double threshold =
      resolve_tensile_strength(pd.tensile_strength, stress.max_principal());
  const std::vector<InelasticDomain> domains =
      detect_inelastic_domains(stress, threshold, mesh, pd.detection_rule);
  const GradientBundle bundle = compute_gradients(mesh, element, rho, pd.penalty,
                                                  u, stress, domains, solver);

  const int n = mesh.element_count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937 rng(seed);
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng() % static_cast<std::uint32_t>(i + 1)]);
  order.resize(std::min(probe_count, n));
  std::sort(order.begin(), order.end());

  GradientCheckReport report;
  report.probe_count = static_cast<int>(order.size());
  report.seed = seed;
  report.families.resize(3);
  GradientFamilyReport& objective = report.families[0];
  GradientFamilyReport& mass = report.families[1];
  GradientFamilyReport& dissipation = report.families[2];
  objective.name = "objective";
  objective.threshold = 1e-5;
  mass.name = "mass";
  mass.threshold = 1e-5;
  dissipation.name = "dissipation";
  dissipation.threshold = 1e-4;
  dissipation.skipped = domains.empty();

  const double objective_scale = bundle.objective.lpNorm<Eigen::Infinity>();
  const double mass_scale = bundle.mass.lpNorm<Eigen::Infinity>();
  double dissipation_scale = 0.0;
  for (const Eigen::VectorXd& g : bundle.dissipation)
    dissipation_scale = std::max(dissipation_scale, g.lpNorm<Eigen::Infinity>());

  DensityField perturbed = rho;
  const auto evaluate = [&](double& f, double& m, std::vector<double>& rates) {
    solver.factorize(perturbed, pd.penalty);
    const Eigen::VectorXd up = solver.solve(load);
    f = compliance(up, load);
    m = perturbed.mass(mesh);
    const StressField sp =
        recover_stresses(mesh, element, perturbed, up, pd.penalty);
    rates.resize(domains.size());
    for (std::size_t d = 0; d < domains.size(); ++d)
      rates[d] = dissipation_rate(sp, domains[d], mesh.det_jacobian());
  };

  for (int k : order) {
    const double eps = 1e-6 * rho.rho[k];
    double f_plus = 0.0, f_minus = 0.0, m_plus = 0.0, m_minus = 0.0;
    std::vector<double> h_plus, h_minus;

    perturbed.rho[k] = rho.rho[k] + eps;
    evaluate(f_plus, m_plus, h_plus);
    perturbed.rho[k] = rho.rho[k] - eps;
    evaluate(f_minus, m_minus, h_minus);
    perturbed.rho[k] = rho.rho[k];

    record_probe(objective, k, bundle.objective[k],
                 (f_plus - f_minus) / (2.0 * eps), objective_scale);
    record_probe(mass, k, bundle.mass[k], (m_plus - m_minus) / (2.0 * eps),
                 mass_scale);
    for (std::size_t d = 0; d < domains.size(); ++d)
      record_probe(dissipation, k, bundle.dissipation[d][k],
                   (h_plus[d] - h_minus[d]) / (2.0 * eps), dissipation_scale);
  }

  for (GradientFamilyReport& family : report.families) {
    family.passed = family.skipped || family.max_relative_error <= family.threshold;
    report.passed = report.passed && family.passed;
  }
  return report;
}

std::string gradient_report_text(const GradientCheckReport& report) {
  std::string out = "gradient check: " + std::to_string(report.probe_count) +
                    " probes, seed " + std::to_string(report.seed) + "\n";
  char buf[160];
  for (const GradientFamilyReport& family : report.families) {
    if (family.skipped) {
      std::snprintf(buf, sizeof buf, "  %-12s no domains, skipped\n",
                    family.name.c_str());
    } else {
      std::snprintf(buf, sizeof buf,
                    "  %-12s max relative error %-11.3g threshold %-8g %s\n",
                    family.name.c_str(), family.max_relative_error,
                    family.threshold, family.passed ? "PASS" : "FAIL");
    }
    out += buf;
  }
  out += report.passed ? "overall PASS\n" : "overall FAIL\n";
  return out;
}

}  // namespace stm
