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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reltoa/errors.hpp"
#include "reltoa/physcore.hpp"
#include "reltoa/waves.hpp"

namespace reltoa::config {

/// Malformed document. line() is 1-based.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, int line)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Raw "[section]" / "key = value" document. '#' and ';' start comments.
struct Document {
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections;
};

Document parse_document(std::string_view text);

enum class EvolveSource { Coarse, Analytic, RazaviReal, RazaviComplex };
const char* to_string(EvolveSource source);

struct GridSettings {
  double half_length = 1.0;
  int nodes = 201;  // total point count, odd
  std::string solver = "blocks";  // blocks | full
  double classification_threshold = 1e-6;
  bool vectors = true;
  std::optional<double> tau_window_min;
  std::optional<double> tau_window_max;
};

struct KernelSettings {
  double dq_min = 1e-3;
  double dq_max = 30.0;
  int dq_points = 61;
  double rel_tol = 1e-10;
  std::vector<double> pv_delta_q{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  double pv_p_max = 1200.0;
  int pv_points = 16;
  double pv_tolerance = 1e-6;
};

struct EvolveSettings {
  EvolveSource source = EvolveSource::Coarse;
  double tau = 0.9944;
  std::vector<double> tau_imag{-1.0, 1.0};
  std::vector<double> epsilon{0.5, 0.2, 0.05};
  double delta = 0.001;
  double t_min = 0.0;
  double t_max = 2.0;
  int t_points = 81;
  double q_min = -1.5;
  double q_max = 1.5;
  int q_points = 601;
  double p_max = 300.0;
  int p_points = 6001;
  double window = 1.0;
  int interp_points = 2001;
};

struct ExpectationSettings {
  std::vector<double> p_values{2.0, 3.0, 5.0, 8.0, 10.0};
  std::vector<double> sigma_values{0.5};
  int n_max = 40;
  double tolerance = 1e-9;
  bool exact = true;
};

struct DistSettings {
  double tau_min = 1.0;
  double tau_max = 6.0;
  int tau_points = 501;
  double p_max = 30.0;
  int p_points = 6001;
  std::vector<std::string> kinds{"coarse", "analytic"};
  std::vector<double> epsilon{0.5, 0.1, 0.02};
  bool include_nodal = false;
  std::vector<double> t_shift{1.0};
};

struct RunConfig {
  physcore::PhysicalParams params;
  waves::WavepacketSpec wavepacket{-3.0, 5.0, 0.5, std::nullopt};
  GridSettings grid;
  KernelSettings kernel;
  EvolveSettings evolve;
  ExpectationSettings expectation;
  DistSettings dist;
};

/// Builds a validated RunConfig. Unknown sections or keys, malformed values
/// and violated constraints throw; ValidationError::field() names the key.
RunConfig build_config(const Document& doc);

RunConfig parse_config(std::string_view text);
/// `overlay` entries replace entries of `base` (used for preset + user file).
RunConfig parse_config(std::string_view base, std::string_view overlay);

/// Fully resolved configuration as a document, defaults included.
std::string to_ini(const RunConfig& config);

}  // namespace reltoa::config
