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

#include "reltoa/toadist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

// pchip in this Boost release calls isnan unqualified.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include "reltoa/csv.hpp"
#include "reltoa/errors.hpp"
#include "reltoa/parallel.hpp"

namespace reltoa::toadist {

namespace {

using Complex = std::complex<double>;

double trapezoid(const std::vector<double>& y, double h) {
  if (y.size() < 2) return 0.0;
  double acc = 0.0;
  for (double v : y) acc += v;
  return h * (acc - 0.5 * (y.front() + y.back()));
}

void finish(ToaDistribution& d) {
  d.raw_integral = trapezoid(d.density_raw, d.tau_grid.step);
  d.density = d.density_raw;
  d.normalized = d.raw_integral > 0.0;
  if (d.normalized) {
    for (double& v : d.density) v /= d.raw_integral;
  }
}

void add_common_meta(ToaDistribution& d, const WavepacketSpec& spec, const PhysicalParams& params) {
  auto& m = d.metadata;
  m.emplace_back("source", to_string(d.source));
  m.emplace_back("mass", csv::format(params.mass()));
  m.emplace_back("light_speed", csv::format(params.light_speed()));
  m.emplace_back("hbar", csv::format(params.hbar()));
  m.emplace_back("q0", csv::format(spec.q0));
  m.emplace_back("p0", csv::format(spec.p0));
  m.emplace_back("sigma", csv::format(spec.sigma));
  if (spec.support_half_width) m.emplace_back("support_half_width", csv::format(*spec.support_half_width));
}

void check_momentum_grid(const WavepacketSpec& spec, const UniformGrid& tau_grid,
                         const PhysicalParams& params, const UniformGrid& p_grid) {
  const auto [lo, hi] = spec.extent();
  const double reach = std::max(std::abs(lo), std::abs(hi));
  const double tau_max = tau_grid.max_abs();
  const double hbar = params.hbar();
  if (!(p_grid.step * reach / hbar < std::numbers::pi)) {
    throw DomainError("momentum step " + csv::format(p_grid.step) +
                      " does not resolve a packet reaching |q| = " + csv::format(reach));
  }
  if (!(p_grid.step * params.light_speed() * tau_max / hbar < std::numbers::pi)) {
    throw DomainError("momentum step " + csv::format(p_grid.step) +
                      " does not resolve the phase exp(i E tau / hbar) at |tau| = " + csv::format(tau_max));
  }
}

// |sum_p a(p) exp(i E_p tau / hbar) dp|^2 on every tau.
std::vector<double> overlap_density(const std::vector<Complex>& a, const UniformGrid& p_grid,
                                    const UniformGrid& tau_grid, const PhysicalParams& params) {
  std::vector<double> energy(p_grid.count);
  for (std::size_t i = 0; i < p_grid.count; ++i) energy[i] = params.energy(p_grid[i]) / params.hbar();
  std::vector<double> out(tau_grid.count);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::size_t j = 0; j < tau_grid.count; ++j) {
    const double tau = tau_grid[j];
    Complex acc = 0.0;
    for (std::size_t i = 0; i < p_grid.count; ++i) {
      const double w = (i == 0 || i + 1 == p_grid.count) ? 0.5 : 1.0;
      acc += w * a[i] * std::polar(1.0, energy[i] * tau);
    }
    out[j] = std::norm(acc * p_grid.step);
  }
  return out;
}

ToaDistribution from_momentum(const WavepacketSpec& spec, const UniformGrid& tau_grid,
                              const PhysicalParams& params, const UniformGrid& p_grid,
                              Source source, double t_shift,
                              const std::function<Complex(double)>& eigen_amplitude) {
  spec.validate();
  check_momentum_grid(spec, tau_grid, params, p_grid);
  std::vector<Complex> a(p_grid.count);
  for (std::size_t i = 0; i < p_grid.count; ++i) {
    const double p = p_grid[i];
    Complex psi = waves::gaussian_momentum_value(spec, p, params);
    if (t_shift != 0.0) psi *= std::polar(1.0, -params.energy(p) * t_shift / params.hbar());
    // eigen_amplitude(p) carries the tau-independent part of the eigenfunction.
    a[i] = std::conj(psi) * eigen_amplitude(p);
  }
  ToaDistribution d;
  d.tau_grid = tau_grid;
  d.source = source;
  d.density_raw = overlap_density(a, p_grid, tau_grid, params);
  add_common_meta(d, spec, params);
  d.metadata.emplace_back("p_min", csv::format(p_grid.start));
  d.metadata.emplace_back("p_max", csv::format(p_grid.stop()));
  d.metadata.emplace_back("p_points", std::to_string(p_grid.count));
  finish(d);
  return d;
}

}  // namespace

const char* to_string(Source source) {
  switch (source) {
    case Source::CoarseNonNodal:
      return "coarse";
    case Source::AnalyticNonNodal:
      return "analytic";
    case Source::RazaviReal:
      return "razavi-real";
  }
  return "unknown";
}

ToaDistribution dist_analytic(const WavepacketSpec& spec, const UniformGrid& tau_grid,
                              const PhysicalParams& params, const UniformGrid& p_grid) {
  auto amp = [&](double p) { return waves::nonnodal_value(p, 0.0, params); };
  return from_momentum(spec, tau_grid, params, p_grid, Source::AnalyticNonNodal, 0.0, amp);
}

ToaDistribution dist_translated(const WavepacketSpec& spec, double t_shift,
                                const UniformGrid& tau_grid, const PhysicalParams& params,
                                const UniformGrid& p_grid) {
  auto amp = [&](double p) { return waves::nonnodal_value(p, 0.0, params); };
  ToaDistribution d =
      from_momentum(spec, tau_grid, params, p_grid, Source::AnalyticNonNodal, t_shift, amp);
  d.metadata.emplace_back("t_shift", csv::format(t_shift));
  return d;
}

ToaDistribution dist_razavi_real(const WavepacketSpec& spec, const UniformGrid& tau_grid,
                                 double epsilon, const PhysicalParams& params,
                                 const UniformGrid& p_grid) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive", "epsilon");
  auto amp = [&](double p) { return waves::razavi_real_value(p, 0.0, epsilon, params); };
  ToaDistribution d = from_momentum(spec, tau_grid, params, p_grid, Source::RazaviReal, 0.0, amp);
  d.metadata.emplace_back("epsilon", csv::format(epsilon));
  return d;
}

ToaDistribution dist_coarse(const WavepacketSpec& spec, const nystrom::EigenSystem& system,
                            const UniformGrid& tau_grid, const CoarseOptions& options) {
  spec.validate();
  const auto& grid = system.grid;
  const double l = grid.half_length;
  // Probability outside the box.
  double outside = 0.0;
  if (spec.support_half_width) {
    const double a = *spec.support_half_width;
    outside = (spec.q0 - a < -l || spec.q0 + a > l) ? 1.0 : 0.0;
  } else {
    const double r = std::sqrt(2.0) * spec.sigma;
    outside = 0.5 * std::erfc((l - spec.q0) / r) + 0.5 * std::erfc((l + spec.q0) / r);
  }
  if (outside > options.support_tolerance) {
    throw DomainError("dist_coarse: wavepacket carries probability " + csv::format(outside) +
                      " outside the box [-l, l] with l = " + csv::format(l));
  }
  if (!system.has_vectors()) throw DomainError("dist_coarse: eigensystem has no eigenvectors");

  std::vector<Complex> psi(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    psi[k] = std::conj(waves::gaussian_position_value(spec, grid.nodes[k], system.params)) * grid.weights[k];
  }
  // Modes closer together than the tau step form one cluster whose tau and
  // |O|^2 are averaged.
  std::vector<double> taus, dens;
  std::vector<double> cluster_first;
  std::vector<std::size_t> members;
  for (const auto& mode : system.modes) {
    if (!options.include_nodal && mode.parity_class != nystrom::ParityClass::NonNodal) continue;
    Complex o = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) o += psi[k] * mode.vector(static_cast<Eigen::Index>(k));
    const double v = std::norm(o);
    if (!taus.empty() && mode.tau - cluster_first.back() < tau_grid.step) {
      const std::size_t last = taus.size() - 1;
      const double m = static_cast<double>(++members[last]);
      taus[last] += (mode.tau - taus[last]) / m;
      dens[last] += (v - dens[last]) / m;
      continue;
    }
    taus.push_back(mode.tau);
    dens.push_back(v);
    cluster_first.push_back(mode.tau);
    members.push_back(1);
  }
  std::size_t inside = 0;
  for (double t : taus) {
    if (t >= tau_grid.start && t <= tau_grid.stop()) ++inside;
  }
  if (inside < options.min_modes || taus.size() < 4) {
    throw DomainError("dist_coarse: only " + std::to_string(inside) +
                      " modes fall inside the tau window");
  }
  if (tau_grid.start < taus.front() || tau_grid.stop() > taus.back()) {
    throw DomainError("dist_coarse: tau window [" + csv::format(tau_grid.start) + ", " +
                      csv::format(tau_grid.stop()) + "] extends beyond the computed modes [" +
                      csv::format(taus.front()) + ", " + csv::format(taus.back()) + "]");
  }
  const std::size_t used = taus.size();
  boost::math::interpolators::pchip<std::vector<double>> spline(std::move(taus), std::move(dens));

  ToaDistribution d;
  d.tau_grid = tau_grid;
  d.source = Source::CoarseNonNodal;
  d.density_raw.resize(tau_grid.count);
  for (std::size_t j = 0; j < tau_grid.count; ++j) d.density_raw[j] = std::max(0.0, spline(tau_grid[j]));
  add_common_meta(d, spec, system.params);
  d.metadata.emplace_back("half_length", csv::format(l));
  d.metadata.emplace_back("nodes", std::to_string(grid.size()));
  d.metadata.emplace_back("modes_used", std::to_string(used));
  d.metadata.emplace_back("include_nodal", options.include_nodal ? "true" : "false");
  finish(d);
  return d;
}

double mass_between(const ToaDistribution& dist, double a, double b) {
  const UniformGrid& g = dist.tau_grid;
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < g.count; ++j) {
    const double t0 = g[j], t1 = g[j + 1];
    const double lo = std::max(a, t0), hi = std::min(b, t1);
    if (!(hi > lo)) continue;
    // Linear density on the cell.
    const double y0 = dist.density[j], y1 = dist.density[j + 1];
    auto y = [&](double t) { return y0 + (y1 - y0) * (t - t0) / (t1 - t0); };
    acc += 0.5 * (hi - lo) * (y(lo) + y(hi));
  }
  return acc;
}

double superluminal_mass(const ToaDistribution& dist, double t_photon) {
  return std::clamp(mass_between(dist, dist.tau_grid.start, t_photon), 0.0, 1.0);
}

double l1_distance(const ToaDistribution& a, const ToaDistribution& b) {
  if (a.tau_grid.count != b.tau_grid.count || a.tau_grid.step != b.tau_grid.step) {
    throw DomainError("l1_distance: distributions are on different tau grids");
  }
  std::vector<double> diff(a.density.size());
  for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = std::abs(a.density[j] - b.density[j]);
  return trapezoid(diff, a.tau_grid.step);
}

double mean(const ToaDistribution& dist) {
  std::vector<double> y(dist.density.size());
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = dist.tau_grid[j] * dist.density[j];
  return trapezoid(y, dist.tau_grid.step);
}

double peak(const ToaDistribution& dist) {
  const auto& y = dist.density_raw;
  const auto i = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  if (i == 0 || i + 1 == y.size()) return dist.tau_grid[i];
  return waves::parabolic_vertex(dist.tau_grid[i], dist.tau_grid.step, -y[i - 1], -y[i], -y[i + 1]);
}

double max_density_raw(const ToaDistribution& dist) {
  return *std::max_element(dist.density_raw.begin(), dist.density_raw.end());
}

void write_csv(std::ostream& out, const ToaDistribution& dist) {
  for (const auto& [k, v] : dist.metadata) {
    if (k != "source") continue;
    csv::write_meta(out, k, v);
  }
  for (const auto& [k, v] : dist.metadata) {
    if (k == "source") continue;
    csv::write_meta(out, k, v);
  }
  csv::write_meta(out, "tau_min", dist.tau_grid.start);
  csv::write_meta(out, "tau_max", dist.tau_grid.stop());
  csv::write_meta(out, "tau_points", std::to_string(dist.tau_grid.count));
  csv::write_meta(out, "normalization_integral", dist.raw_integral);
  csv::write_meta(out, "normalized", dist.normalized ? "true" : "false");
  csv::write_header(out, {"tau", "density_raw", "density_normalized"});
  for (std::size_t j = 0; j < dist.tau_grid.count; ++j) {
    csv::write_row(out, {dist.tau_grid[j], dist.density_raw[j], dist.density[j]});
  }
}

}  // namespace reltoa::toadist
