/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#ifndef STM_IO_HPP
#define STM_IO_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "stm/optimizer.hpp"

namespace stm {

/// Shortest exact decimal form of a double (17 significant digits).
std::string format_double(double value);

/// Density table with a self-describing grid header. Round-trips through
/// parse_density_csv bit for bit.
struct DensityTable {
  int nx = 0;
  int ny = 0;
  double rho_min = 0.0;
  Eigen::VectorXd rho;
};

std::string density_csv(const DensityTable& table);
DensityTable parse_density_csv(const std::string& text);

/// Plain (ASCII) PGM render, one pixel per element, image top row is the
/// mesh top row. Full density maps to black, rho_min to white.
std::string render_pgm(const DensityTable& table);

std::string history_csv(const std::vector<HistoryRecord>& history,
                        int domain_count);

/// Run manifest: problem echo, resolved threshold, domain summary, stop
/// state and output file names. Contains nothing time- or host-dependent
/// so repeated runs produce identical bytes.
std::string manifest_json(const OptimizationResult& result,
                          const std::vector<std::string>& snapshot_files);

std::string read_text(const std::string& path);

/// Writes through a temporary sibling plus rename so readers never see a
/// partial file.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace stm

#endif  // STM_IO_HPP
