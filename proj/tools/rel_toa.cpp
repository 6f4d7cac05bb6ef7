// Copyright 2026 The rel-toa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rel-toa: command-line front end. See README.md for the subcommands.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "reltoa/config.hpp"
#include "reltoa/errors.hpp"
#include "reltoa/scenarios.hpp"

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw reltoa::ValidationError("cannot read config file '" + path.string() + "'", "config");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string description(const std::string& name) {
  if (name == "kernel") return "T_c closed form vs quadrature, momentum-space oracle";
  if (name == "spectrum") return "Coarse-grained eigenvalues and eigenfunctions";
  if (name == "evolve") return "Time evolution of eigenfunctions, arrival diagnostics";
  if (name == "expectation") return "Expected arrival time: exact, resummed, series";
  if (name == "qfactor") return "Quantum correction factor tables";
  if (name == "dist") return "Arrival-time distributions";
  if (name == "translate") return "Distributions of time-translated packets";
  return "Run the acceptance criteria";
}

}  // namespace

int main(int argc, char** argv) {
  namespace app = reltoa::app;
  CLI::App cli{"Relativistic time-of-arrival operator: kernel, spectra, dynamics, expectation values and "
               "arrival-time distributions."};
  cli.require_subcommand(1);
  cli.footer("Presets: " + [] {
    std::string s;
    for (const auto& n : app::preset_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }() + "\nExit status: 0 ok, 1 selftest criterion failed, 2 invalid input, 3 numerical non-convergence.");

  // CLI11 would report a stray word as "subcommand required"; name it instead.
  if (argc > 1 && argv[1][0] != '-' && !app::is_subcommand(argv[1])) {
    std::cerr << "error: unknown subcommand '" << argv[1] << "'\n\n" << cli.help();
    return app::exit_validation;
  }

  std::string config_path, preset, out_dir = "rel-toa-out";
  for (const std::string& name : app::subcommand_names()) {
    auto* sub = cli.add_subcommand(name, description(name));
    sub->add_option("--config", config_path, "INI configuration file (overrides the preset)");
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--preset", preset, "Start from a bundled figure preset");
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << cli.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << cli.help();
    return app::exit_validation;
  }

  const std::string name = cli.get_subcommands().front()->get_name();
  reltoa::config::RunConfig cfg;
  try {
    const std::string base = preset.empty() ? std::string() : app::preset_text(preset);
    const std::string user = config_path.empty() ? std::string() : read_file(config_path);
    cfg = reltoa::config::parse_config(base, user);
  } catch (const reltoa::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return app::exit_validation;
  }
  return app::run_subcommand(name, cfg, out_dir, std::cout, std::cerr);
}
