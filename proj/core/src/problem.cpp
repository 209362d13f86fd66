/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/problem.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stm/errors.hpp"

namespace stm {

using json = nlohmann::ordered_json;

namespace {

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(join_path(path, item.key()), "unknown field");
  }
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  const json* j = find(obj, key);
  if (!j) throw ConfigError(join_path(path, key), "required field is missing");
  return *j;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected a boolean");
  return j.get<bool>();
}

double number_or(const json& obj, const std::string& path, const std::string& key,
                 double fallback) {
  const json* j = find(obj, key);
  return j ? as_number(*j, join_path(path, key)) : fallback;
}

int int_or(const json& obj, const std::string& path, const std::string& key, int fallback) {
  const json* j = find(obj, key);
  return j ? as_int(*j, join_path(path, key)) : fallback;
}

bool bool_or(const json& obj, const std::string& path, const std::string& key, bool fallback) {
  const json* j = find(obj, key);
  return j ? as_bool(*j, join_path(path, key)) : fallback;
}

std::array<double, 4> as_box(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4)
    throw ConfigError(path, "expected an array [xmin, ymin, xmax, ymax]");
  std::array<double, 4> box{};
  for (int i = 0; i < 4; ++i) box[i] = as_number(j[i], path);
  if (box[0] > box[2] || box[1] > box[3])
    throw ConfigError(path, "box min corner must not exceed max corner");
  return box;
}

NodeSelector parse_selector(const json& j, const std::string& path) {
  expect_object(j, path);
  check_keys(j, path, {"edge", "nodes", "box"});
  if (j.size() != 1)
    throw ConfigError(path, "selector needs exactly one of: edge, nodes, box");

  NodeSelector sel;
  if (const json* e = find(j, "edge")) {
    if (!e->is_string()) throw ConfigError(join_path(path, "edge"), "expected a string");
    const std::string name = e->get<std::string>();
    sel.kind = SelectorKind::kEdge;
    if (name == "top")
      sel.edge = EdgeName::kTop;
    else if (name == "bottom")
      sel.edge = EdgeName::kBottom;
    else if (name == "left")
      sel.edge = EdgeName::kLeft;
    else if (name == "right")
      sel.edge = EdgeName::kRight;
    else
      throw ConfigError(join_path(path, "edge"),
                        "must be one of: top, bottom, left, right");
  } else if (const json* n = find(j, "nodes")) {
    if (!n->is_array() || n->empty())
      throw ConfigError(join_path(path, "nodes"), "expected a non-empty array of node ids");
    sel.kind = SelectorKind::kNodeList;
    for (std::size_t i = 0; i < n->size(); ++i) {
      const int id = as_int((*n)[i], join_path(path, "nodes"));
      if (id < 0) throw ConfigError(join_path(path, "nodes"), "node ids must be >= 0");
      sel.nodes.push_back(id);
    }
  } else {
    sel.kind = SelectorKind::kBox;
    sel.box = as_box(*find(j, "box"), join_path(path, "box"));
  }
  return sel;
}

TensileStrength parse_strength(const json& j, const std::string& path) {
  TensileStrength ts;
  if (j.is_number()) {
    ts.mode = StrengthMode::kAbsolute;
    ts.value = j.get<double>();
    return ts;
  }
  expect_object(j, path);
  check_keys(j, path, {"mode", "value", "factor"});
  const json& mode = require(j, path, "mode");
  if (!mode.is_string()) throw ConfigError(join_path(path, "mode"), "expected a string");
  const std::string name = mode.get<std::string>();
  if (name == "absolute") {
    ts.mode = StrengthMode::kAbsolute;
    ts.value = as_number(require(j, path, "value"), join_path(path, "value"));
  } else if (name == "scaled_to_initial_max") {
    ts.mode = StrengthMode::kScaledToInitialMax;
    ts.value = as_number(require(j, path, "factor"), join_path(path, "factor"));
  } else {
    throw ConfigError(join_path(path, "mode"),
                      "must be one of: absolute, scaled_to_initial_max");
  }
  return ts;
}

json emit_selector(const NodeSelector& sel) {
  json j = json::object();
  switch (sel.kind) {
    case SelectorKind::kEdge: {
      const char* names[] = {"top", "bottom", "left", "right"};
      j["edge"] = names[static_cast<int>(sel.edge)];
      break;
    }
    case SelectorKind::kNodeList:
      j["nodes"] = sel.nodes;
      break;
    case SelectorKind::kBox:
      j["box"] = sel.box;
      break;
  }
  return j;
}

}  // namespace

ProblemDefinition parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("document", std::string("not valid JSON: ") + e.what());
  }
  expect_object(doc, "document");
  check_keys(doc, "", {"schema_version", "grid", "material", "loads", "supports",
                       "optimizer", "passive_regions"});

  ProblemDefinition pd;
  pd.schema_version = int_or(doc, "", "schema_version", 1);
  if (pd.schema_version != 1)
    throw ConfigError("schema_version", "unsupported schema version");

  const json& grid = require(doc, "", "grid");
  expect_object(grid, "grid");
  check_keys(grid, "grid", {"nx", "ny", "element_size", "thickness"});
  pd.nx = as_int(require(grid, "grid", "nx"), "grid.nx");
  pd.ny = as_int(require(grid, "grid", "ny"), "grid.ny");
  pd.element_size = number_or(grid, "grid", "element_size", 1.0);
  pd.thickness = number_or(grid, "grid", "thickness", 1.0);

  if (const json* material = find(doc, "material")) {
    expect_object(*material, "material");
    check_keys(*material, "material",
               {"young_modulus", "poisson_ratio", "tensile_strength"});
    pd.young_modulus = number_or(*material, "material", "young_modulus", 1.0);
    pd.poisson_ratio = number_or(*material, "material", "poisson_ratio", 0.2);
    if (const json* ts = find(*material, "tensile_strength"))
      pd.tensile_strength = parse_strength(*ts, "material.tensile_strength");
    else
      pd.tensile_strength = {StrengthMode::kScaledToInitialMax, 10.0};
  } else {
    pd.tensile_strength = {StrengthMode::kScaledToInitialMax, 10.0};
  }

  const json& loads = require(doc, "", "loads");
  if (!loads.is_array()) throw ConfigError("loads", "expected an array");
  for (std::size_t i = 0; i < loads.size(); ++i) {
    const std::string path = "loads[" + std::to_string(i) + "]";
    const json& entry = loads[i];
    expect_object(entry, path);
    check_keys(entry, path, {"at", "fx", "fy"});
    LoadSpec load;
    load.at = parse_selector(require(entry, path, "at"), path + ".at");
    load.fx = number_or(entry, path, "fx", 0.0);
    load.fy = number_or(entry, path, "fy", 0.0);
    pd.loads.push_back(load);
  }

  const json& supports = require(doc, "", "supports");
  if (!supports.is_array()) throw ConfigError("supports", "expected an array");
  for (std::size_t i = 0; i < supports.size(); ++i) {
    const std::string path = "supports[" + std::to_string(i) + "]";
    const json& entry = supports[i];
    expect_object(entry, path);
    check_keys(entry, path, {"at", "fix_x", "fix_y"});
    SupportSpec support;
    support.at = parse_selector(require(entry, path, "at"), path + ".at");
    support.fix_x = bool_or(entry, path, "fix_x", false);
    support.fix_y = bool_or(entry, path, "fix_y", false);
    pd.supports.push_back(support);
  }

  const json& opt = require(doc, "", "optimizer");
  expect_object(opt, "optimizer");
  check_keys(opt, "optimizer",
             {"mass_fraction", "penalty", "step", "rho_min", "max_iterations",
              "step_tolerance", "objective_tolerance", "release_pinned",
              "detection_rule", "restoration_period"});
  pd.mass_fraction =
      as_number(require(opt, "optimizer", "mass_fraction"), "optimizer.mass_fraction");
  pd.penalty = number_or(opt, "optimizer", "penalty", 3.0);
  pd.step = number_or(opt, "optimizer", "step", 0.05);
  pd.rho_min = number_or(opt, "optimizer", "rho_min", 1e-3);
  pd.max_iterations = int_or(opt, "optimizer", "max_iterations", 500);
  pd.tolerances.step = number_or(opt, "optimizer", "step_tolerance", 1e-4);
  pd.tolerances.objective = number_or(opt, "optimizer", "objective_tolerance", 1e-6);
  pd.release_pinned = bool_or(opt, "optimizer", "release_pinned", true);
  pd.restoration_period = int_or(opt, "optimizer", "restoration_period", 0);
  if (const json* rule = find(opt, "detection_rule")) {
    if (!rule->is_string())
      throw ConfigError("optimizer.detection_rule", "expected a string");
    const std::string name = rule->get<std::string>();
    if (name == "any_gauss_point")
      pd.detection_rule = DetectionRule::kAnyGaussPoint;
    else if (name == "gauss_average")
      pd.detection_rule = DetectionRule::kGaussAverage;
    else
      throw ConfigError("optimizer.detection_rule",
                        "must be one of: any_gauss_point, gauss_average");
  }

  if (const json* regions = find(doc, "passive_regions")) {
    if (!regions->is_array()) throw ConfigError("passive_regions", "expected an array");
    for (std::size_t i = 0; i < regions->size(); ++i)
      pd.passive_regions.push_back(
          as_box((*regions)[i], "passive_regions[" + std::to_string(i) + "]"));
  }

  validate(pd);
  return pd;
}

ProblemDefinition parse_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read problem file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading problem file: " + path);
  return parse_problem(buffer.str());
}

std::string emit_problem(const ProblemDefinition& pd) {
  json doc = json::object();
  doc["schema_version"] = pd.schema_version;
  doc["grid"] = {{"nx", pd.nx},
                 {"ny", pd.ny},
                 {"element_size", pd.element_size},
                 {"thickness", pd.thickness}};

  json strength = json::object();
  if (pd.tensile_strength.mode == StrengthMode::kAbsolute) {
    strength["mode"] = "absolute";
    strength["value"] = pd.tensile_strength.value;
  } else {
    strength["mode"] = "scaled_to_initial_max";
    strength["factor"] = pd.tensile_strength.value;
  }
  doc["material"] = {{"young_modulus", pd.young_modulus},
                     {"poisson_ratio", pd.poisson_ratio},
                     {"tensile_strength", strength}};

  json loads = json::array();
  for (const LoadSpec& load : pd.loads)
    loads.push_back({{"at", emit_selector(load.at)}, {"fx", load.fx}, {"fy", load.fy}});
  doc["loads"] = loads;

  json supports = json::array();
  for (const SupportSpec& support : pd.supports)
    supports.push_back({{"at", emit_selector(support.at)},
                        {"fix_x", support.fix_x},
                        {"fix_y", support.fix_y}});
  doc["supports"] = supports;

  doc["optimizer"] = {{"mass_fraction", pd.mass_fraction},
                      {"penalty", pd.penalty},
                      {"step", pd.step},
                      {"rho_min", pd.rho_min},
                      {"max_iterations", pd.max_iterations},
                      {"step_tolerance", pd.tolerances.step},
                      {"objective_tolerance", pd.tolerances.objective},
                      {"release_pinned", pd.release_pinned},
                      {"detection_rule", pd.detection_rule == DetectionRule::kAnyGaussPoint
                                             ? "any_gauss_point"
                                             : "gauss_average"},
                      {"restoration_period", pd.restoration_period}};

  json regions = json::array();
  for (const auto& box : pd.passive_regions) regions.push_back(box);
  doc["passive_regions"] = regions;

  return doc.dump(2) + "\n";
}

void validate(const ProblemDefinition& pd) {
  if (pd.nx < 1) throw ConfigError("grid.nx", "must be >= 1");
  if (pd.ny < 1) throw ConfigError("grid.ny", "must be >= 1");
  if (!(pd.element_size > 0.0)) throw ConfigError("grid.element_size", "must be > 0");
  if (!(pd.thickness > 0.0)) throw ConfigError("grid.thickness", "must be > 0");
  if (!(pd.young_modulus > 0.0))
    throw ConfigError("material.young_modulus", "must be > 0");
  if (!(pd.poisson_ratio >= 0.0 && pd.poisson_ratio < 0.5))
    throw ConfigError("material.poisson_ratio", "must satisfy 0 <= nu < 0.5");
  if (!(pd.tensile_strength.value > 0.0))
    throw ConfigError("material.tensile_strength",
                      pd.tensile_strength.mode == StrengthMode::kAbsolute
                          ? "value must be > 0"
                          : "factor must be > 0");
  if (!(pd.mass_fraction > 0.0 && pd.mass_fraction <= 1.0))
    throw ConfigError("optimizer.mass_fraction", "must be in (0, 1]");
  if (!(pd.rho_min > 0.0 && pd.rho_min < pd.mass_fraction))
    throw ConfigError("optimizer.rho_min", "must satisfy 0 < rho_min < mass_fraction");
  if (!(pd.step > 0.0)) throw ConfigError("optimizer.step", "must be > 0");
  if (!(pd.penalty >= 1.0)) throw ConfigError("optimizer.penalty", "must be >= 1");
  if (pd.max_iterations < 1) throw ConfigError("optimizer.max_iterations", "must be >= 1");
  if (!(pd.tolerances.step >= 0.0))
    throw ConfigError("optimizer.step_tolerance", "must be >= 0");
  if (!(pd.tolerances.objective >= 0.0))
    throw ConfigError("optimizer.objective_tolerance", "must be >= 0");
  if (pd.restoration_period < 0)
    throw ConfigError("optimizer.restoration_period", "must be >= 0");

  if (pd.loads.empty()) throw ConfigError("loads", "at least one load is required");
  bool any_nonzero = false;
  for (const LoadSpec& load : pd.loads)
    if (load.fx != 0.0 || load.fy != 0.0) any_nonzero = true;
  if (!any_nonzero) throw ConfigError("loads", "at least one load must be nonzero");

  if (pd.supports.empty())
    throw ConfigError("supports", "at least one support is required");
  for (std::size_t i = 0; i < pd.supports.size(); ++i)
    if (!pd.supports[i].fix_x && !pd.supports[i].fix_y)
      throw ConfigError("supports[" + std::to_string(i) + "]",
                        "must fix at least one of fix_x, fix_y");

  for (const auto& box : pd.passive_regions)
    if (box[0] > box[2] || box[1] > box[3])
      throw ConfigError("passive_regions", "box min corner must not exceed max corner");
}

}  // namespace stm
