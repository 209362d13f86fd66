/*
  This file is part of stmgen, a density-based strut-and-tie layout
  generator for planar concrete discontinuity regions.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <doctest.h>

#include "stm/commands.hpp"
#include "stm/io.hpp"
#include "support.hpp"

using namespace stm;
using test::fixture_path;

namespace {

namespace fs = std::filesystem;

fs::path cli_scratch() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() /
             ("stm_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out_file = cli_scratch() / ("stdout_" + std::to_string(counter));
  const fs::path err_file = cli_scratch() / ("stderr_" + std::to_string(counter));
  ++counter;

  const std::string command = std::string(STM_TOOL_PATH) + " " + args + " > " +
                              out_file.string() + " 2> " + err_file.string();
  const int raw = std::system(command.c_str());
  CliResult result;
  REQUIRE(raw != -1);
  REQUIRE(WIFEXITED(raw));
  result.code = WEXITSTATUS(raw);
  result.out = read_text(out_file.string());
  result.err = read_text(err_file.string());
  return result;
}

int parse_iterations(const std::string& manifest) {
  const auto pos = manifest.find("\"iterations\": ");
  REQUIRE(pos != std::string::npos);
  return std::atoi(manifest.c_str() + pos + 14);
}

}  // namespace

TEST_CASE("no arguments is a usage error") {
  const CliResult r = run_cli("");
  CHECK(r.code == kExitUsage);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("help exits cleanly") {
  const CliResult r = run_cli("--help");
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("run") != std::string::npos);
  CHECK(r.out.find("check-gradients") != std::string::npos);
  CHECK(r.out.find("render") != std::string::npos);
}

TEST_CASE("a missing problem file is an input error naming the path") {
  const fs::path out = cli_scratch() / "missing_problem";
  const CliResult r =
      run_cli("run /nowhere/at/all.json --out " + out.string());
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("/nowhere/at/all.json") != std::string::npos);
}

TEST_CASE("malformed problem JSON is an input error") {
  const fs::path bad = cli_scratch() / "bad.json";
  write_text_atomic(bad.string(), "{ this is not json");
  const fs::path out = cli_scratch() / "bad_out";
  const CliResult r = run_cli("run " + bad.string() + " --out " + out.string());
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("bad.json") != std::string::npos);
}

TEST_CASE("a zero stride is rejected before any work") {
  const fs::path out = cli_scratch() / "stride_out";
  const CliResult r = run_cli("run " + fixture_path("deep_beam_06.json") +
                              " --out " + out.string() + " --stride 0");
  CHECK(r.code == kExitUsage);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("a zero probe count is rejected") {
  const CliResult r =
      run_cli("check-gradients " + fixture_path("deep_beam_06.json") +
              " --probes 0");
  CHECK(r.code == kExitUsage);
}

TEST_CASE("the gradient audit runs and reports every family") {
  const CliResult r =
      run_cli("check-gradients " + fixture_path("deep_beam_06.json"));
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("objective") != std::string::npos);
  CHECK(r.out.find("mass") != std::string::npos);
  CHECK(r.out.find("dissipation") != std::string::npos);
  CHECK(r.out.find("overall PASS") != std::string::npos);
}

TEST_CASE("a full run writes the documented artifact set") {
  const fs::path out = cli_scratch() / "run_alpha";
  const CliResult r = run_cli("run " + fixture_path("deep_beam_06.json") +
                              " --out " + out.string() + " --stride 10");
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("stopped at iteration ") != std::string::npos);

  for (const char* name :
       {"manifest.json", "history.csv", "density_final.csv", "density_final.pgm"}) {
    CHECK(fs::exists(out / name));
  }

  const std::string manifest = read_text((out / "manifest.json").string());
  const int last = parse_iterations(manifest);
  CHECK(last > 0);

  std::vector<std::string> expected;
  for (int n = 0; n < last; n += 10) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "density_%06d.pgm", n);
    expected.push_back(buf);
    CHECK(fs::exists(out / buf));
  }
  int snapshot_count = 0;
  for (const auto& entry : fs::directory_iterator(out)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("density_0", 0) == 0) ++snapshot_count;
  }
  CHECK(snapshot_count == static_cast<int>(expected.size()));
  for (const auto& name : expected)
    CHECK(manifest.find(name) != std::string::npos);

  // History has a header plus one row per recorded iteration.
  const std::string history = read_text((out / "history.csv").string());
  const long rows = std::count(history.begin(), history.end(), '\n');
  CHECK(rows == last + 2);
  CHECK(history.rfind("iteration,objective,mass_residual", 0) == 0);

  SUBCASE("re-rendering the stored table reproduces the image") {
    const fs::path pgm = cli_scratch() / "rerender.pgm";
    const CliResult rr = run_cli("render " +
                                 (out / "density_final.csv").string() + " " +
                                 pgm.string());
    CHECK(rr.code == kExitOk);
    CHECK(read_text(pgm.string()) ==
          read_text((out / "density_final.pgm").string()));
  }

  SUBCASE("an identical invocation reproduces every byte") {
    const fs::path again = cli_scratch() / "run_beta";
    const CliResult r2 = run_cli("run " + fixture_path("deep_beam_06.json") +
                                 " --out " + again.string() + " --stride 10");
    CHECK(r2.code == kExitOk);
    for (const char* name : {"manifest.json", "history.csv",
                             "density_final.csv", "density_final.pgm"}) {
      CHECK(read_text((out / name).string()) ==
            read_text((again / name).string()));
    }
  }
}

TEST_CASE("rendering a missing table is an input error") {
  const fs::path pgm = cli_scratch() / "never.pgm";
  const CliResult r = run_cli("render /no/table.csv " + pgm.string());
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("/no/table.csv") != std::string::npos);
}

TEST_CASE("rendering a malformed table names the line") {
  const fs::path csv = cli_scratch() / "mangled.csv";
  write_text_atomic(csv.string(),
                    "# schema_version=1 nx=2 ny=1 rho_min=0.001\n"
                    "element,rho\n0,0.5\navocado\n");
  const fs::path pgm = cli_scratch() / "mangled.pgm";
  const CliResult r = run_cli("render " + csv.string() + " " + pgm.string());
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("line 4") != std::string::npos);
  CHECK_FALSE(fs::exists(pgm));
}

TEST_CASE("an unwritable output location is an output error") {
  const fs::path blocker = cli_scratch() / "blocker";
  write_text_atomic(blocker.string(), "plain file");

  const CliResult r = run_cli("run " + fixture_path("deep_beam_06.json") +
                              " --out " + (blocker / "sub").string());
  CHECK(r.code == kExitOutputError);

  const fs::path csv = cli_scratch() / "ok.csv";
  write_text_atomic(csv.string(),
                    "# schema_version=1 nx=1 ny=1 rho_min=0.001\n"
                    "element,rho\n0,0.5\n");
  const CliResult rr =
      run_cli("render " + csv.string() + " " + (blocker / "out.pgm").string());
  CHECK(rr.code == kExitOutputError);
}

TEST_CASE("solver failures surface as a dedicated exit code") {
  // A single pinned node leaves a rigid rotation unconstrained.
  const std::string text = read_text(fixture_path("deep_beam_06.json"));
  const std::string broken =
      test::replace_once(text, "{\"at\": {\"edge\": \"top\"}",
                         "{\"at\": {\"nodes\": [0]}");
  REQUIRE(broken != text);

  const fs::path path = cli_scratch() / "underconstrained.json";
  write_text_atomic(path.string(), broken);
  const fs::path out = cli_scratch() / "never_out";
  const CliResult r = run_cli("run " + path.string() + " --out " + out.string());
  CHECK(r.code == kExitSolveError);
  CHECK(r.err.find("iteration 0") != std::string::npos);
}
