/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "stm/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>
#include <vector>

#include "stm/errors.hpp"
#include "stm/io.hpp"
#include "stm/optimizer.hpp"
#include "stm/problem.hpp"

namespace stm {

namespace {

namespace fs = std::filesystem;

bool load_problem(const std::string& path, ProblemDefinition& pd,
                  std::ostream& err) {
  try {
    pd = parse_problem_file(path);
    return true;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ConfigError& e) {
    err << "error: " << path << ": " << e.what() << "\n";
  }
  return false;
}

std::string snapshot_name(int iteration) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "density_%06d.pgm", iteration);
  return buf;
}

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  if (options.stride < 1) {
    err << "error: --stride must be at least 1\n";
    return kExitUsage;
  }

  ProblemDefinition pd;
  if (!load_problem(options.problem_path, pd, err)) return kExitInputError;

  struct Snapshot {
    int iteration;
    Eigen::VectorXd rho;
  };
  std::vector<Snapshot> snapshots;

  OptimizationResult result;
  try {
    result = run_optimization(pd, [&](const OptimizationState& state) {
      if (state.iteration % options.stride == 0)
        snapshots.push_back({state.iteration, state.density->rho});
    });
  } catch (const SolveError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolveError;
  }

  for (const std::string& warning : result.warnings)
    err << "warning: " << warning << "\n";

  // The final field gets its own files; a stride snapshot landing on the
  // last iteration would duplicate them.
  const int last = result.history.back().iteration;
  while (!snapshots.empty() && snapshots.back().iteration == last)
    snapshots.pop_back();

  try {
    fs::create_directories(options.out_dir);
    const fs::path dir(options.out_dir);

    std::vector<std::string> snapshot_files;
    for (const Snapshot& snap : snapshots) {
      const std::string name = snapshot_name(snap.iteration);
      write_text_atomic((dir / name).string(),
                        render_pgm({pd.nx, pd.ny, pd.rho_min, snap.rho}));
      snapshot_files.push_back(name);
    }

    const DensityTable final_table{pd.nx, pd.ny, pd.rho_min,
                                   result.final_density.rho};
    write_text_atomic((dir / "density_final.csv").string(),
                      density_csv(final_table));
    write_text_atomic((dir / "density_final.pgm").string(),
                      render_pgm(final_table));
    write_text_atomic(
        (dir / "history.csv").string(),
        history_csv(result.history, static_cast<int>(result.domains.size())));
    write_text_atomic((dir / "manifest.json").string(),
                      manifest_json(result, snapshot_files));
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitOutputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitOutputError;
  }

  out << "stopped at iteration " << last << " (" << stop_reason_name(result.stop)
      << "), objective " << format_double(result.final_objective) << ", "
      << result.domains.size() << " inelastic domain(s)\n";
  return kExitOk;
}

int cmd_check_gradients(const CheckOptions& options, std::ostream& out,
                        std::ostream& err) {
  if (options.probes < 1) {
    err << "error: --probes must be at least 1\n";
    return kExitUsage;
  }

  ProblemDefinition pd;
  if (!load_problem(options.problem_path, pd, err)) return kExitInputError;

  GradientCheckReport report;
  try {
    report = check_gradients(pd, options.probes, options.seed);
  } catch (const SolveError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolveError;
  }

  out << gradient_report_text(report);
  return report.passed ? kExitOk : kExitGradientFailure;
}

int cmd_render(const std::string& csv_path, const std::string& image_path,
               std::ostream& err) {
  std::string text;
  try {
    text = read_text(csv_path);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  DensityTable table;
  try {
    table = parse_density_csv(text);
  } catch (const IoError& e) {
    err << "error: " << csv_path << ": " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    write_text_atomic(image_path, render_pgm(table));
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitOutputError;
  }
  return kExitOk;
}

}  // namespace stm
