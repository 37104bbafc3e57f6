/*
 * Copyright 2026 The cpinterp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cpinterp/commands.hpp"

namespace {

using cpinterp::cli::CommandResult;
using cpinterp::io::json;

int emit(const CommandResult &r, const std::string &out_path) {
  for (const auto &d : r.report.value("diagnostics", json::array()))
    std::cerr << "warning: " << d.get<std::string>() << "\n";
  if (!r.message.empty())
    std::cerr << "error: " << r.message << "\n";
  const std::string text = r.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return cpinterp::cli::kParse;
    }
    out << text;
  }
  return r.exit_code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Completely positive interpolation: feasibility, synthesis and "
               "verification of maps between commuting Hermitian families"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  app.add_option("--config", config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "seed for the joint-diagonalization combination");
  app.add_option("--tol", tol, "base feasibility tolerance (default 1e-8)");
  app.add_option("--out", out_path, "write the report here instead of stdout");

  std::string problem, map_file, matrix_file, a_file, b_file, cls;
  std::optional<int> grid;

  auto *analyze = app.add_subcommand("analyze", "per-class feasibility report");
  analyze->add_option("problem", problem)->required()->check(CLI::ExistingFile);

  auto *synth = app.add_subcommand("synthesize", "construct an interpolating map");
  synth->add_option("problem", problem)->required()->check(CLI::ExistingFile);
  synth->add_option("--class", cls)
      ->required()
      ->check(CLI::IsMember(cpinterp::cli::synthesis_classes()));
  synth->add_option("--out", out_path, "write the report here");

  auto *verify = app.add_subcommand("verify", "check a map against a problem");
  verify->add_option("map", map_file)->required()->check(CLI::ExistingFile);
  verify->add_option("problem", problem)->required()->check(CLI::ExistingFile);

  auto *decompose =
      app.add_subcommand("decompose", "Birkhoff decomposition of a doubly "
                                      "stochastic matrix");
  decompose->add_option("matrix", matrix_file)->required()->check(CLI::ExistingFile);

  auto *numrange =
      app.add_subcommand("numrange", "test W(B) inside W(A) on an angle grid");
  numrange->add_option("A", a_file)->required()->check(CLI::ExistingFile);
  numrange->add_option("B", b_file)->required()->check(CLI::ExistingFile);
  numrange->add_option("--grid", grid, "number of support directions (default 720)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cpinterp::cli::kParse;
  }

  namespace io = cpinterp::io;
  namespace cli = cpinterp::cli;
  try {
    cpinterp::Config cfg;
    if (!config_path.empty())
      cfg = io::decode_config(io::read_json_file(config_path), cfg);
    if (seed)
      cfg.seed = *seed;
    if (tol)
      cfg.tol.feasibility = *tol;
    if (grid)
      cfg.grid = *grid;

    CommandResult r;
    if (*analyze)
      r = cli::cmd_analyze(io::read_json_file(problem), cfg);
    else if (*synth)
      r = cli::cmd_synthesize(io::read_json_file(problem), cls, cfg);
    else if (*verify)
      r = cli::cmd_verify(io::read_json_file(map_file),
                          io::read_json_file(problem), cfg);
    else if (*decompose)
      r = cli::cmd_decompose(io::read_json_file(matrix_file), cfg);
    else
      r = cli::cmd_numrange(io::read_json_file(a_file),
                            io::read_json_file(b_file), cfg);
    return emit(r, out_path);
  } catch (const cpinterp::InputError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kParse;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInternal;
  }
}
