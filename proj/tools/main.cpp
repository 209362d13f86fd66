/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stm/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"density-based strut-and-tie layout generator"};
  app.require_subcommand(1);

  stm::RunOptions run_options;
  CLI::App* run = app.add_subcommand("run", "optimize a problem and write its artifacts");
  run->add_option("problem", run_options.problem_path, "problem definition JSON")
      ->required();
  run->add_option("--out", run_options.out_dir, "output directory")->required();
  run->add_option("--stride", run_options.stride, "iterations between density snapshots")
      ->check(CLI::PositiveNumber);

  stm::CheckOptions check_options;
  CLI::App* check = app.add_subcommand(
      "check-gradients", "audit analytic gradients against finite differences");
  check->add_option("problem", check_options.problem_path, "problem definition JSON")
      ->required();
  check->add_option("--probes", check_options.probes, "number of probed elements")
      ->check(CLI::PositiveNumber);

  std::string csv_path;
  std::string image_path;
  CLI::App* render =
      app.add_subcommand("render", "redraw a stored density table as a PGM image");
  render->add_option("csv", csv_path, "density CSV path")->required();
  render->add_option("pgm", image_path, "output image path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? stm::kExitOk : stm::kExitUsage;
  }

  if (run->parsed()) return stm::cmd_run(run_options, std::cout, std::cerr);
  if (check->parsed())
    return stm::cmd_check_gradients(check_options, std::cout, std::cerr);
  return stm::cmd_render(csv_path, image_path, std::cerr);
}
