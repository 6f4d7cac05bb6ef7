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

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "reltoa/nystrom.hpp"
#include "reltoa/waves.hpp"

namespace reltoa::toadist {

using physcore::PhysicalParams;
using waves::UniformGrid;
using waves::WavepacketSpec;

enum class Source { CoarseNonNodal, AnalyticNonNodal, RazaviReal };

const char* to_string(Source source);

struct ToaDistribution {
  UniformGrid tau_grid;
  std::vector<double> density_raw;
  /// density_raw divided by its trapezoid integral over tau_grid.
  std::vector<double> density;
  Source source = Source::AnalyticNonNodal;
  double raw_integral = 0.0;
  bool normalized = true;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Pi(tau) = |int dp conj(psi~(p)) Phi_tau(p)|^2 with the non-nodal
/// eigenfunction, trapezoid rule on p_grid. Throws DomainError when the
/// momentum step does not resolve the packet position or the largest tau.
ToaDistribution dist_analytic(const WavepacketSpec& spec, const UniformGrid& tau_grid,
                              const PhysicalParams& params, const UniformGrid& p_grid);

struct CoarseOptions {
  bool include_nodal = false;
  /// Largest packet probability allowed outside [-l, l].
  double support_tolerance = 1e-6;
  std::size_t min_modes = 4;
};

/// Overlaps O = sum_k w_k conj(psi(q_k)) v_k with the coarse modes, |O|^2
/// resampled onto tau_grid by monotone cubic (PCHIP) interpolation. Modes
/// closer together than the tau step are merged (tau and |O|^2 averaged).
ToaDistribution dist_coarse(const WavepacketSpec& spec, const nystrom::EigenSystem& system,
                            const UniformGrid& tau_grid, const CoarseOptions& options = {});

ToaDistribution dist_razavi_real(const WavepacketSpec& spec, const UniformGrid& tau_grid,
                                 double epsilon, const PhysicalParams& params,
                                 const UniformGrid& p_grid);

/// Distribution of the packet evolved for t_shift. Equals dist_analytic
/// evaluated at tau + t_shift.
ToaDistribution dist_translated(const WavepacketSpec& spec, double t_shift,
                                const UniformGrid& tau_grid, const PhysicalParams& params,
                                const UniformGrid& p_grid);

/// Normalized probability of arrival before t_photon.
double superluminal_mass(const ToaDistribution& dist, double t_photon);
/// Normalized probability inside [a, b].
double mass_between(const ToaDistribution& dist, double a, double b);
/// Trapezoid L1 distance of the normalized densities; grids must match.
double l1_distance(const ToaDistribution& a, const ToaDistribution& b);
double mean(const ToaDistribution& dist);
/// Location of the density maximum, refined by a parabola.
double peak(const ToaDistribution& dist);
double max_density_raw(const ToaDistribution& dist);

/// "# key=value" metadata block, then tau,density_raw,density_normalized.
void write_csv(std::ostream& out, const ToaDistribution& dist);

}  // namespace reltoa::toadist
