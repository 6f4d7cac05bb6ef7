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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "reltoa/config.hpp"
#include "reltoa/io.hpp"
#include "reltoa/nystrom.hpp"
#include "reltoa/waves.hpp"

namespace reltoa::app {

/// Exit statuses of run_subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failed_criteria = 1;  // selftest ran, some criterion failed
inline constexpr int exit_validation = 2;
inline constexpr int exit_convergence = 3;

const std::vector<std::string>& subcommand_names();
bool is_subcommand(std::string_view name);

/// Names of the bundled figure presets (fig1 ... fig9, fig7-compact).
std::vector<std::string> preset_names();
/// INI text of a preset; throws ValidationError for an unknown name.
const std::string& preset_text(std::string_view name);

/// Runs one subcommand, writing its artifacts into `out`. Throws on failure
/// and leaves cleanup to the caller. Returns exit_ok or exit_failed_criteria.
int run_scenario(std::string_view name, const config::RunConfig& cfg, io::OutputSet& out,
                 std::ostream& log);

/// run_scenario plus config echo, manifest and error-to-exit-code mapping.
/// On failure nothing is left behind in `out_dir`.
int run_subcommand(std::string_view name, const config::RunConfig& cfg,
                   const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err);

// Pieces shared with the acceptance suite.

/// Coarse-grained eigensystem for the [grid] settings. `window` restricts
/// the block solver to (first, second]; the full solver ignores it.
nystrom::EigenSystem solve_grid(const config::GridSettings& grid,
                                const physcore::PhysicalParams& params,
                                nystrom::ParityBlock parity,
                                std::optional<std::pair<double, double>> window, bool vectors);

/// Spline-interpolated coarse mode, transformed to momentum space and
/// tagged with the converging factor.
waves::MomentumFunction coarse_mode_momentum(const nystrom::EigenMode& mode,
                                             const nystrom::EigenSystem& system,
                                             const config::EvolveSettings& settings);

/// Position-space snapshots of exp(-i H t) g on the [evolve] t and q grids.
std::vector<waves::Snapshot> propagate(const waves::MomentumFunction& g,
                                       const config::EvolveSettings& settings,
                                       const physcore::PhysicalParams& params);

}  // namespace reltoa::app
