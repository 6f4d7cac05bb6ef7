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

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "reltoa/physcore.hpp"

namespace reltoa::waves {

using physcore::PhysicalParams;
using Complex = std::complex<double>;

/// count points start, start + step, ..., start + (count-1) step.
struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double operator[](std::size_t i) const noexcept { return start + step * static_cast<double>(i); }
  double stop() const noexcept { return (*this)[count - 1]; }
  double max_abs() const noexcept;
  std::size_t size() const noexcept { return count; }

  /// count points spanning [a, b] inclusive; count >= 2, a < b.
  static UniformGrid span(double a, double b, std::size_t count);
  /// Symmetric grid on [-half, half]; count odd so that 0 is a point.
  static UniformGrid symmetric(double half, std::size_t count);
};

struct WavepacketSpec {
  double q0 = 0.0;
  double p0 = 0.0;
  double sigma = 1.0;
  /// Compact support [q0 - a, q0 + a] when set.
  std::optional<double> support_half_width;

  void validate() const;
  /// Interval outside of which the packet is negligible (support or q0 +- 8 sigma).
  std::pair<double, double> extent() const;
};

struct PositionFunction {
  UniformGrid grid;
  std::vector<Complex> values;
  /// Trapezoid L2 norm.
  double norm() const;
};

struct MomentumFunction {
  UniformGrid grid;
  std::vector<Complex> values;
  /// A factor exp(-delta p^2) is applied when transforming back to position.
  double converging_delta = 0.0;
  bool normalized = true;
  double norm() const;
};

/// Default momentum cutoff max(10 hbar/sigma, 10 mu c + |p0|).
double default_momentum_cutoff(const WavepacketSpec& spec, const PhysicalParams& params);

/// psi(q) = (sigma sqrt(2 pi))^{-1/2} exp(-(q-q0)^2 / 4 sigma^2) exp(i p0 q / hbar),
/// cut to the support and rescaled by 1/sqrt(erf(a / (sqrt 2 sigma))) when
/// a compact support is given.
Complex gaussian_position_value(const WavepacketSpec& spec, double q, const PhysicalParams& params);
PositionFunction gaussian_position(const WavepacketSpec& spec, const UniformGrid& q_grid,
                                   const PhysicalParams& params);

/// Momentum amplitude (2 pi hbar)^{-1/2} int dq exp(-i p q / hbar) psi(q).
/// Closed form for the plain Gaussian; composite Gauss-Legendre over the
/// support otherwise.
Complex gaussian_momentum_value(const WavepacketSpec& spec, double p, const PhysicalParams& params);
MomentumFunction gaussian_momentum(const WavepacketSpec& spec, const UniformGrid& p_grid,
                                   const PhysicalParams& params);

/// Throws DomainError unless dq * max|p| / hbar < pi and dp * max|q| / hbar < pi.
void check_sampling(const UniformGrid& q_grid, const UniformGrid& p_grid, const PhysicalParams& params);

MomentumFunction to_momentum(const PositionFunction& f, const UniformGrid& p_grid,
                             const PhysicalParams& params);
/// Inverse transform of exp(-i E_p t / hbar) exp(-delta p^2) g(p).
PositionFunction to_position(const MomentumFunction& g, const UniformGrid& q_grid,
                             const PhysicalParams& params, double t = 0.0);

MomentumFunction evolve(const MomentumFunction& g, double t, const PhysicalParams& params);

/// sqrt(|p| c / E_p) exp(i E_p tau / hbar), unit discrete norm when
/// Im tau > 0 (the only square-integrable case), otherwise unnormalized.
MomentumFunction razavi_complex_eigenfunction(const UniformGrid& p_grid, Complex tau,
                                              const PhysicalParams& params);
Complex razavi_real_value(double p, double tau, double epsilon, const PhysicalParams& params);
MomentumFunction razavi_real_eigenfunction(const UniformGrid& p_grid, double tau, double epsilon,
                                           const PhysicalParams& params);
Complex nonnodal_value(double p, double tau, const PhysicalParams& params);
MomentumFunction nonnodal_eigenfunction(const UniformGrid& p_grid, double tau,
                                        const PhysicalParams& params);
MomentumFunction nodal_eigenfunction(const UniformGrid& p_grid, double tau,
                                     const PhysicalParams& params);

struct Snapshot {
  double t = 0.0;
  PositionFunction psi;
};

struct ArrivalReport {
  std::vector<double> times;
  std::vector<double> spreads;
  double t_min_spread = 0.0;
  /// Density maxima on either side of the arrival point and their distance.
  std::vector<double> left_peaks;
  std::vector<double> right_peaks;
  std::vector<double> peak_separation;
  /// Time of closest approach of the two peaks; empty when the minimum sits
  /// at the edge of the time window.
  std::optional<double> t_min_separation;
};

/// Windowed second moment about the arrival point per snapshot, with the
/// density renormalized on |q - arrival_point| <= window. Snapshots must be
/// ordered in time. Throws DomainError when the spread minimum is at the
/// first or last snapshot.
ArrivalReport arrival_diagnostic(const std::vector<Snapshot>& snapshots, double arrival_point,
                                 double window);

/// Vertex of the parabola through three equally spaced samples.
double parabolic_vertex(double x0, double h, double y_minus, double y_zero, double y_plus);

/// Columns t, q, density, re, im.
void write_snapshots_csv(std::ostream& out, const std::vector<Snapshot>& snapshots);
/// Columns p, re, im.
void write_momentum_csv(std::ostream& out, const MomentumFunction& g);

}  // namespace reltoa::waves
