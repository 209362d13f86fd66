/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_PROBLEM_HPP
#define STM_PROBLEM_HPP

#include <array>
#include <string>
#include <vector>

namespace stm {

// Node selectors let fixtures name node sets without enumerating indices:
// a whole mesh edge, an explicit id list, or an axis-aligned coordinate box.
enum class SelectorKind { kEdge, kNodeList, kBox };
enum class EdgeName { kTop, kBottom, kLeft, kRight };

struct NodeSelector {
  SelectorKind kind = SelectorKind::kEdge;
  EdgeName edge = EdgeName::kTop;
  std::vector<int> nodes;            // kind == kNodeList
  std::array<double, 4> box{};       // kind == kBox: {xmin, ymin, xmax, ymax}

  bool operator==(const NodeSelector&) const = default;
};

/// A nodal force (fx, fy) applied to every node matched by the selector.
struct LoadSpec {
  NodeSelector at;
  double fx = 0.0;
  double fy = 0.0;

  bool operator==(const LoadSpec&) const = default;
};

struct SupportSpec {
  NodeSelector at;
  bool fix_x = false;
  bool fix_y = false;

  bool operator==(const SupportSpec&) const = default;
};

// The tensile strength is either an absolute stress or a multiple of the
// largest first principal stress of the initial elastic solution. The
// scaled form makes the low/high strength regimes expressible without
// committing the fixture to a load magnitude.
enum class StrengthMode { kAbsolute, kScaledToInitialMax };

struct TensileStrength {
  StrengthMode mode = StrengthMode::kAbsolute;
  double value = 1.0;  // stress for kAbsolute, factor for kScaledToInitialMax

  bool operator==(const TensileStrength&) const = default;
};

// Inelastic elements are those whose first principal stress exceeds the
// tensile strength at any Gauss point; the average rule is provided for
// sensitivity studies.
enum class DetectionRule { kAnyGaussPoint, kGaussAverage };

struct Tolerances {
  double step = 1e-4;       // stop when the projected direction inf-norm falls below
  double objective = 1e-6;  // stop on relative objective change over a 10-iteration window

  bool operator==(const Tolerances&) const = default;
};

/// Complete declarative description of one optimization run; the single
/// source of truth parsed from a problem document.
struct ProblemDefinition {
  int schema_version = 1;

  // geometry
  int nx = 0;
  int ny = 0;
  double element_size = 1.0;
  double thickness = 1.0;

  // material
  double young_modulus = 1.0;
  double poisson_ratio = 0.2;
  TensileStrength tensile_strength;

  std::vector<LoadSpec> loads;
  std::vector<SupportSpec> supports;

  // optimizer parameters
  double mass_fraction = 0.0;
  double penalty = 3.0;      // SIMP exponent p
  double step = 0.05;        // update magnitude gamma (max per-element density change)
  double rho_min = 1e-3;
  int max_iterations = 500;
  Tolerances tolerances;
  bool release_pinned = true;       // active-set release by multiplier sign
  DetectionRule detection_rule = DetectionRule::kAnyGaussPoint;
  int restoration_period = 0;       // 0 = off; k > 0 corrects constraint drift every k iterations

  // Axis-aligned boxes whose elements are held at rho_min for the whole
  // run (openings and other non-designable regions on the structured grid).
  std::vector<std::array<double, 4>> passive_regions;

  bool operator==(const ProblemDefinition&) const = default;
};

/// Parses a problem document (JSON text) and validates every invariant.
/// Throws ConfigError naming the offending field.
ProblemDefinition parse_problem(const std::string& text);

/// Reads and parses a problem file. Throws IoError if unreadable.
ProblemDefinition parse_problem_file(const std::string& path);

/// Emits the canonical document for a definition; parse_problem applied to
/// the result reproduces the definition exactly.
std::string emit_problem(const ProblemDefinition& pd);

/// Re-checks all ProblemDefinition invariants (parse_problem calls this).
void validate(const ProblemDefinition& pd);

}  // namespace stm

#endif  // STM_PROBLEM_HPP
