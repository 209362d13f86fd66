/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_MESH_HPP
#define STM_MESH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "stm/problem.hpp"

namespace stm {

struct ResolvedLoad {
  std::vector<int> nodes;  // sorted
  double fx = 0.0;
  double fy = 0.0;
};

struct ResolvedSupport {
  std::vector<int> nodes;  // sorted
  bool fix_x = false;
  bool fix_y = false;
};

/// Structured grid of square four-node elements. Nodes are numbered
/// row-major from the bottom-left corner, elements likewise; each node
/// carries dofs (2*node, 2*node + 1) for (x, y).
class Mesh {
 public:
  int nx = 0;
  int ny = 0;
  double element_size = 1.0;
  double thickness = 1.0;

  std::vector<ResolvedLoad> loads;
  std::vector<ResolvedSupport> supports;
  std::vector<int> passive_elements;  // sorted; held at rho_min

  int node_count() const { return (nx + 1) * (ny + 1); }
  int element_count() const { return nx * ny; }
  int dof_count() const { return 2 * node_count(); }

  int node_index(int i, int j) const { return j * (nx + 1) + i; }
  Eigen::Vector2d node_coord(int n) const {
    const int i = n % (nx + 1);
    const int j = n / (nx + 1);
    return {i * element_size, j * element_size};
  }

  // Counter-clockwise connectivity of element e = ey*nx + ex.
  std::array<int, 4> element_nodes(int e) const {
    const int ex = e % nx;
    const int ey = e / nx;
    return {node_index(ex, ey), node_index(ex + 1, ey),
            node_index(ex + 1, ey + 1), node_index(ex, ey + 1)};
  }

  std::array<int, 8> element_dofs(int e) const {
    const auto n = element_nodes(e);
    return {2 * n[0], 2 * n[0] + 1, 2 * n[1], 2 * n[1] + 1,
            2 * n[2], 2 * n[2] + 1, 2 * n[3], 2 * n[3] + 1};
  }

  Eigen::Vector2d element_center(int e) const {
    const int ex = e % nx;
    const int ey = e / nx;
    return {(ex + 0.5) * element_size, (ey + 0.5) * element_size};
  }

  double element_volume() const { return element_size * element_size * thickness; }
  double total_volume() const { return element_count() * element_volume(); }

  // Jacobian determinant of the square bilinear map, constant over the
  // element and identical for all elements.
  double det_jacobian() const { return 0.25 * element_size * element_size; }

  bool is_passive(int e) const;

  /// Mass budget: mass_fraction over the designable volume, rho_min over
  /// passive volume (passive densities never move).
  double target_mass(double mass_fraction, double rho_min) const;

  /// Assembled nodal force vector (length dof_count()).
  Eigen::VectorXd load_vector() const;

  /// Per-dof mask, true where a support fixes the dof.
  std::vector<std::uint8_t> fixed_dof_mask() const;
};

/// Builds the structured mesh and resolves every load/support selector to
/// node index sets. Throws ConfigError when a selector matches no node.
Mesh build_mesh(const ProblemDefinition& pd);

/// Nodes matched by a selector, sorted ascending; empty result is the
/// caller's error to report.
std::vector<int> resolve_selector(const NodeSelector& sel, const Mesh& mesh);

}  // namespace stm

#endif  // STM_MESH_HPP
