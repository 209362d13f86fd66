/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/mesh.hpp"

#include <algorithm>
#include <string>

#include "stm/errors.hpp"

namespace stm {

namespace {

// Geometric tolerance for box selection so nodes sitting exactly on a box
// face are matched despite round-off in fixture coordinates.
double box_tolerance(const Mesh& mesh) { return 1e-9 * mesh.element_size; }

bool in_box(const Eigen::Vector2d& p, const std::array<double, 4>& box, double tol) {
  return p.x() >= box[0] - tol && p.x() <= box[2] + tol && p.y() >= box[1] - tol &&
         p.y() <= box[3] + tol;
}

}  // namespace

std::vector<int> resolve_selector(const NodeSelector& sel, const Mesh& mesh) {
  std::vector<int> out;
  switch (sel.kind) {
    case SelectorKind::kEdge: {
      const bool horizontal =
          sel.edge == EdgeName::kTop || sel.edge == EdgeName::kBottom;
      if (horizontal) {
        const int j = sel.edge == EdgeName::kTop ? mesh.ny : 0;
        for (int i = 0; i <= mesh.nx; ++i) out.push_back(mesh.node_index(i, j));
      } else {
        const int i = sel.edge == EdgeName::kRight ? mesh.nx : 0;
        for (int j = 0; j <= mesh.ny; ++j) out.push_back(mesh.node_index(i, j));
      }
      break;
    }
    case SelectorKind::kNodeList:
      out = sel.nodes;
      for (int id : out)
        if (id < 0 || id >= mesh.node_count())
          throw ConfigError("nodes", "node id " + std::to_string(id) +
                                         " outside mesh with " +
                                         std::to_string(mesh.node_count()) + " nodes");
      break;
    case SelectorKind::kBox: {
      const double tol = box_tolerance(mesh);
      for (int n = 0; n < mesh.node_count(); ++n)
        if (in_box(mesh.node_coord(n), sel.box, tol)) out.push_back(n);
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Mesh build_mesh(const ProblemDefinition& pd) {
  validate(pd);

  Mesh mesh;
  mesh.nx = pd.nx;
  mesh.ny = pd.ny;
  mesh.element_size = pd.element_size;
  mesh.thickness = pd.thickness;

  for (std::size_t i = 0; i < pd.loads.size(); ++i) {
    ResolvedLoad load;
    load.nodes = resolve_selector(pd.loads[i].at, mesh);
    if (load.nodes.empty())
      throw ConfigError("loads[" + std::to_string(i) + "].at",
                        "selector matches no node");
    load.fx = pd.loads[i].fx;
    load.fy = pd.loads[i].fy;
    mesh.loads.push_back(std::move(load));
  }

  for (std::size_t i = 0; i < pd.supports.size(); ++i) {
    ResolvedSupport support;
    support.nodes = resolve_selector(pd.supports[i].at, mesh);
    if (support.nodes.empty())
      throw ConfigError("supports[" + std::to_string(i) + "].at",
                        "selector matches no node");
    support.fix_x = pd.supports[i].fix_x;
    support.fix_y = pd.supports[i].fix_y;
    mesh.supports.push_back(std::move(support));
  }

  const double tol = box_tolerance(mesh);
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Eigen::Vector2d c = mesh.element_center(e);
    for (const auto& box : pd.passive_regions) {
      if (in_box(c, box, tol)) {
        mesh.passive_elements.push_back(e);
        break;
      }
    }
  }

  return mesh;
}

bool Mesh::is_passive(int e) const {
  return std::binary_search(passive_elements.begin(), passive_elements.end(), e);
}

double Mesh::target_mass(double mass_fraction, double rho_min) const {
  const double v = element_volume();
  const auto passive = static_cast<double>(passive_elements.size());
  const double designable = element_count() - passive;
  return mass_fraction * designable * v + rho_min * passive * v;
}

Eigen::VectorXd Mesh::load_vector() const {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(dof_count());
  for (const ResolvedLoad& load : loads) {
    for (int n : load.nodes) {
      p[2 * n] += load.fx;
      p[2 * n + 1] += load.fy;
    }
  }
  return p;
}

std::vector<std::uint8_t> Mesh::fixed_dof_mask() const {
  std::vector<std::uint8_t> fixed(dof_count(), 0);
  for (const ResolvedSupport& support : supports) {
    for (int n : support.nodes) {
      if (support.fix_x) fixed[2 * n] = 1;
      if (support.fix_y) fixed[2 * n + 1] = 1;
    }
  }
  return fixed;
}

}  // namespace stm
