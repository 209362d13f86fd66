/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stm/errors.hpp"

namespace stm {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void table_error(int line, const std::string& message) {
  throw IoError("density table line " + std::to_string(line) + ": " + message);
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string density_csv(const DensityTable& table) {
  std::string out = "# schema_version=1 nx=" + std::to_string(table.nx) +
                    " ny=" + std::to_string(table.ny) +
                    " rho_min=" + format_double(table.rho_min) + "\n";
  out += "element,rho\n";
  for (int e = 0; e < table.rho.size(); ++e)
    out += std::to_string(e) + "," + format_double(table.rho[e]) + "\n";
  return out;
}

DensityTable parse_density_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  DensityTable table;
  int schema = 0;
  if (!std::getline(in, line)) table_error(1, "empty file");
  ++line_no;
  if (std::sscanf(line.c_str(), "# schema_version=%d nx=%d ny=%d rho_min=%lf",
                  &schema, &table.nx, &table.ny, &table.rho_min) != 4)
    table_error(line_no, "expected '# schema_version=.. nx=.. ny=.. rho_min=..'");
  if (schema != 1)
    table_error(line_no, "unsupported schema_version " + std::to_string(schema));
  if (table.nx <= 0 || table.ny <= 0)
    table_error(line_no, "grid dimensions must be positive");

  if (!std::getline(in, line)) table_error(line_no + 1, "missing column header");
  ++line_no;
  if (line != "element,rho") table_error(line_no, "expected 'element,rho'");

  const int count = table.nx * table.ny;
  table.rho.resize(count);
  int next = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    int element = 0;
    double value = 0.0;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%d,%lf%c", &element, &value, &tail) != 2)
      table_error(line_no, "expected '<element>,<rho>'");
    if (element != next)
      table_error(line_no, "expected element " + std::to_string(next) +
                               ", found " + std::to_string(element));
    if (next >= count) table_error(line_no, "more rows than grid elements");
    table.rho[next++] = value;
  }
  if (next != count)
    table_error(line_no, "expected " + std::to_string(count) + " rows, found " +
                             std::to_string(next));
  return table;
}

std::string render_pgm(const DensityTable& table) {
  std::string out = "P2\n" + std::to_string(table.nx) + " " +
                    std::to_string(table.ny) + "\n255\n";
  std::string line;
  const double span = 1.0 - table.rho_min;
  for (int j = table.ny - 1; j >= 0; --j) {
    for (int i = 0; i < table.nx; ++i) {
      const double rho = table.rho[j * table.nx + i];
      long pixel = std::lround(255.0 * (1.0 - (rho - table.rho_min) / span));
      pixel = std::min(255L, std::max(0L, pixel));
      const std::string token = std::to_string(pixel);
      if (!line.empty() && line.size() + 1 + token.size() > 70) {
        out += line + "\n";
        line.clear();
      }
      if (!line.empty()) line += " ";
      line += token;
    }
  }
  if (!line.empty()) out += line + "\n";
  return out;
}

std::string history_csv(const std::vector<HistoryRecord>& history,
                        int domain_count) {
  std::string out = "iteration,objective,mass_residual";
  for (int d = 0; d < domain_count; ++d)
    out += ",dissipation_" + std::to_string(d) + ",drift_" + std::to_string(d);
  out += ",active_box_count,step_norm_inf\n";

  for (const HistoryRecord& row : history) {
    out += std::to_string(row.iteration) + "," + format_double(row.objective) +
           "," + format_double(row.mass_residual);
    for (int d = 0; d < domain_count; ++d)
      out += "," + format_double(row.dissipation[d]) + "," +
             format_double(row.drift[d]);
    out += "," + std::to_string(row.active_box_count) + "," +
           format_double(row.step_norm_inf) + "\n";
  }
  return out;
}

std::string manifest_json(const OptimizationResult& result,
                          const std::vector<std::string>& snapshot_files) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["problem"] = ordered_json::parse(emit_problem(result.problem));
  doc["resolved_tensile_strength"] = result.resolved_tensile_strength;

  ordered_json domains = ordered_json::array();
  for (const InelasticDomain& domain : result.domains) {
    ordered_json entry;
    entry["id"] = domain.id;
    entry["reference_rate"] = domain.reference_rate;
    entry["elements"] = domain.elements;
    domains.push_back(std::move(entry));
  }
  doc["domains"] = std::move(domains);

  doc["iterations"] = result.history.empty() ? 0 : result.history.back().iteration;
  doc["stop_reason"] = stop_reason_name(result.stop);
  doc["final_objective"] = result.final_objective;
  doc["final_mass_residual"] =
      result.history.empty() ? 0.0 : result.history.back().mass_residual;
  doc["warnings"] = result.warnings;

  ordered_json outputs;
  outputs["history"] = "history.csv";
  outputs["density"] = "density_final.csv";
  outputs["render"] = "density_final.pgm";
  outputs["snapshots"] = snapshot_files;
  doc["outputs"] = std::move(outputs);

  return doc.dump(2) + "\n";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(path + ": read failed");
  return buf.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError(tmp + ": write failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError(path + ": rename from temporary failed");
  }
}

}  // namespace stm
