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

#include "reltoa/waves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "reltoa/csv.hpp"
#include "reltoa/errors.hpp"
#include "reltoa/parallel.hpp"
#include "reltoa/quadrature.hpp"

namespace reltoa::waves {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kReanchor = 256;

double trapezoid_norm(const std::vector<Complex>& v, double step) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (const Complex& x : v) acc += std::norm(x);
  acc -= 0.5 * (std::norm(v.front()) + std::norm(v.back()));
  return std::sqrt(acc * step);
}

// sum_k w_k exp(sign i x s_k / hbar) f_k on a uniform grid s, trapezoid weights.
Complex phase_sum(const UniformGrid& s, const std::vector<Complex>& f, double x, double sign,
                  double hbar) {
  const std::size_t n = s.count;
  const Complex step_phase = std::polar(1.0, sign * x * s.step / hbar);
  Complex acc = 0.0;
  Complex phase;
  for (std::size_t k = 0; k < n; ++k) {
    if (k % kReanchor == 0) {
      phase = std::polar(1.0, sign * x * s[k] / hbar);
    } else {
      phase *= step_phase;
    }
    const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    acc += w * phase * f[k];
  }
  return acc * s.step;
}

std::string describe(const UniformGrid& g) {
  std::ostringstream os;
  os << "[" << csv::format(g.start) << ", " << csv::format(g.stop()) << "] with " << g.count
     << " points";
  return os.str();
}

const quad::GaussLegendreRule& panel_rule() {
  static const quad::GaussLegendreRule rule = quad::gauss_legendre(20);
  return rule;
}

double sqrt_velocity_ratio(double p, const PhysicalParams& params) {
  return std::sqrt(std::abs(p) * params.light_speed() / params.energy(p));
}

}  // namespace

double UniformGrid::max_abs() const noexcept {
  return std::max(std::abs(start), std::abs(stop()));
}

UniformGrid UniformGrid::span(double a, double b, std::size_t count) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("grid bounds must satisfy a < b", "grid");
  }
  if (count < 2) throw ValidationError("grid needs at least 2 points", "grid");
  return {a, (b - a) / static_cast<double>(count - 1), count};
}

UniformGrid UniformGrid::symmetric(double half, std::size_t count) {
  if (count % 2 == 0) throw ValidationError("symmetric grid needs an odd point count", "grid");
  return span(-half, half, count);
}

void WavepacketSpec::validate() const {
  if (!std::isfinite(q0)) throw ValidationError("q0 must be finite", "q0");
  if (!std::isfinite(p0)) throw ValidationError("p0 must be finite", "p0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be positive", "sigma");
  if (support_half_width && !(*support_half_width > 0.0 && std::isfinite(*support_half_width))) {
    throw ValidationError("support half width must be positive", "support_half_width");
  }
}

std::pair<double, double> WavepacketSpec::extent() const {
  double h = 8.0 * sigma;
  if (support_half_width) h = std::min(h, *support_half_width);
  return {q0 - h, q0 + h};
}

double PositionFunction::norm() const { return trapezoid_norm(values, grid.step); }
double MomentumFunction::norm() const { return trapezoid_norm(values, grid.step); }

double default_momentum_cutoff(const WavepacketSpec& spec, const PhysicalParams& params) {
  return std::max(10.0 * params.hbar() / spec.sigma,
                  10.0 * params.mass() * params.light_speed() + std::abs(spec.p0));
}

Complex gaussian_position_value(const WavepacketSpec& spec, double q, const PhysicalParams& params) {
  const double x = q - spec.q0;
  double amp = std::pow(spec.sigma * std::sqrt(2.0 * kPi), -0.5);
  if (spec.support_half_width) {
    const double a = *spec.support_half_width;
    if (std::abs(x) > a) return 0.0;
    amp /= std::sqrt(std::erf(a / (std::sqrt(2.0) * spec.sigma)));
  }
  return amp * std::exp(-x * x / (4.0 * spec.sigma * spec.sigma)) *
         std::polar(1.0, spec.p0 * q / params.hbar());
}

PositionFunction gaussian_position(const WavepacketSpec& spec, const UniformGrid& q_grid,
                                   const PhysicalParams& params) {
  spec.validate();
  const auto [lo, hi] = spec.extent();
  if (q_grid.start > lo || q_grid.stop() < hi) {
    throw DomainError("gaussian_position: grid " + describe(q_grid) + " does not cover [" +
                      csv::format(lo) + ", " + csv::format(hi) + "]");
  }
  PositionFunction f{q_grid, std::vector<Complex>(q_grid.count)};
  for (std::size_t i = 0; i < q_grid.count; ++i) f.values[i] = gaussian_position_value(spec, q_grid[i], params);
  return f;
}

Complex gaussian_momentum_value(const WavepacketSpec& spec, double p, const PhysicalParams& params) {
  const double hbar = params.hbar();
  const double s = spec.sigma;
  const double dp = p - spec.p0;
  const Complex shift = std::polar(1.0, -dp * spec.q0 / hbar);
  if (!spec.support_half_width) {
    return std::pow(2.0 * s * s / (kPi * hbar * hbar), 0.25) * std::exp(-s * s * dp * dp / (hbar * hbar)) *
           shift;
  }
  // 2 int_0^a exp(-x^2/4s^2) cos(k x) dx on panels short against the oscillation.
  const double a = *spec.support_half_width;
  const double k = dp / hbar;
  const auto& rule = panel_rule();
  const int panels = 4 + static_cast<int>(std::ceil(std::abs(k) * a / kPi));
  const double h = a / panels;
  double acc = 0.0;
  for (int j = 0; j < panels; ++j) {
    const double mid = (j + 0.5) * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = mid + 0.5 * h * rule.nodes[i];
      acc += rule.weights[i] * std::exp(-x * x / (4.0 * s * s)) * std::cos(k * x);
    }
  }
  acc *= h;  // 2 * (h/2)
  const double amp = std::pow(s * std::sqrt(2.0 * kPi), -0.5) /
                     std::sqrt(std::erf(a / (std::sqrt(2.0) * s)));
  return amp * acc / std::sqrt(2.0 * kPi * hbar) * shift;
}

MomentumFunction gaussian_momentum(const WavepacketSpec& spec, const UniformGrid& p_grid,
                                   const PhysicalParams& params) {
  spec.validate();
  MomentumFunction g{p_grid, std::vector<Complex>(p_grid.count)};
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::size_t i = 0; i < p_grid.count; ++i) g.values[i] = gaussian_momentum_value(spec, p_grid[i], params);
  return g;
}

void check_sampling(const UniformGrid& q_grid, const UniformGrid& p_grid, const PhysicalParams& params) {
  const double hbar = params.hbar();
  if (!(q_grid.step * p_grid.max_abs() / hbar < kPi)) {
    throw DomainError("sampling: position step too coarse for momentum grid " + describe(p_grid) +
                      " (q grid " + describe(q_grid) + ")");
  }
  if (!(p_grid.step * q_grid.max_abs() / hbar < kPi)) {
    throw DomainError("sampling: momentum step too coarse for position grid " + describe(q_grid) +
                      " (p grid " + describe(p_grid) + ")");
  }
}

MomentumFunction to_momentum(const PositionFunction& f, const UniformGrid& p_grid,
                             const PhysicalParams& params) {
  check_sampling(f.grid, p_grid, params);
  const double hbar = params.hbar();
  const double norm = 1.0 / std::sqrt(2.0 * kPi * hbar);
  MomentumFunction g{p_grid, std::vector<Complex>(p_grid.count)};
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::size_t i = 0; i < p_grid.count; ++i) {
    g.values[i] = norm * phase_sum(f.grid, f.values, p_grid[i], -1.0, hbar);
  }
  return g;
}

PositionFunction to_position(const MomentumFunction& g, const UniformGrid& q_grid,
                             const PhysicalParams& params, double t) {
  check_sampling(q_grid, g.grid, params);
  const double hbar = params.hbar();
  std::vector<Complex> weighted(g.values.size());
  for (std::size_t i = 0; i < g.grid.count; ++i) {
    const double p = g.grid[i];
    Complex v = g.values[i];
    if (t != 0.0) v *= std::polar(1.0, -params.energy(p) * t / hbar);
    if (g.converging_delta > 0.0) v *= std::exp(-g.converging_delta * p * p);
    weighted[i] = v;
  }
  const double norm = 1.0 / std::sqrt(2.0 * kPi * hbar);
  PositionFunction f{q_grid, std::vector<Complex>(q_grid.count)};
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::size_t i = 0; i < q_grid.count; ++i) {
    f.values[i] = norm * phase_sum(g.grid, weighted, q_grid[i], 1.0, hbar);
  }
  return f;
}

MomentumFunction evolve(const MomentumFunction& g, double t, const PhysicalParams& params) {
  MomentumFunction out = g;
  for (std::size_t i = 0; i < g.grid.count; ++i) {
    out.values[i] *= std::polar(1.0, -params.energy(g.grid[i]) * t / params.hbar());
  }
  return out;
}

MomentumFunction razavi_complex_eigenfunction(const UniformGrid& p_grid, Complex tau,
                                              const PhysicalParams& params) {
  MomentumFunction g{p_grid, std::vector<Complex>(p_grid.count)};
  for (std::size_t i = 0; i < p_grid.count; ++i) {
    const double p = p_grid[i];
    const double e = params.energy(p);
    g.values[i] = sqrt_velocity_ratio(p, params) * std::exp(Complex(0.0, 1.0) * e * tau / params.hbar());
  }
  g.normalized = tau.imag() > 0.0;
  if (g.normalized) {
    const double n = g.norm();
    if (n > 0.0) {
      for (Complex& v : g.values) v /= n;
    }
  }
  return g;
}

Complex razavi_real_value(double p, double tau, double epsilon, const PhysicalParams& params) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive", "epsilon");
  const double hbar = params.hbar();
  const double e = params.energy(p);
  return std::sqrt(hbar / (kPi * epsilon)) * (std::sin(epsilon * e / hbar) / e) *
         sqrt_velocity_ratio(p, params) * std::polar(1.0, e * tau / hbar);
}

MomentumFunction razavi_real_eigenfunction(const UniformGrid& p_grid, double tau, double epsilon,
                                           const PhysicalParams& params) {
  MomentumFunction g{p_grid, std::vector<Complex>(p_grid.count)};
  g.normalized = false;
  for (std::size_t i = 0; i < p_grid.count; ++i) g.values[i] = razavi_real_value(p_grid[i], tau, epsilon, params);
  return g;
}

Complex nonnodal_value(double p, double tau, const PhysicalParams& params) {
  const double hbar = params.hbar();
  const double e = params.energy(p);
  return std::sqrt(params.light_speed() / (4.0 * kPi * hbar)) * sqrt_velocity_ratio(p, params) *
         std::polar(1.0, e * tau / hbar);
}

MomentumFunction nonnodal_eigenfunction(const UniformGrid& p_grid, double tau,
                                        const PhysicalParams& params) {
  MomentumFunction g{p_grid, std::vector<Complex>(p_grid.count)};
  g.normalized = false;
  for (std::size_t i = 0; i < p_grid.count; ++i) g.values[i] = nonnodal_value(p_grid[i], tau, params);
  return g;
}

MomentumFunction nodal_eigenfunction(const UniformGrid& p_grid, double tau,
                                     const PhysicalParams& params) {
  MomentumFunction g = nonnodal_eigenfunction(p_grid, tau, params);
  for (std::size_t i = 0; i < p_grid.count; ++i) g.values[i] *= physcore::sgn(p_grid[i]);
  return g;
}

double parabolic_vertex(double x0, double h, double y_minus, double y_zero, double y_plus) {
  const double curvature = y_minus - 2.0 * y_zero + y_plus;
  if (!(curvature > 0.0)) return x0;
  return x0 + 0.5 * h * (y_minus - y_plus) / curvature;
}

namespace {

// Location of the largest sample in [lo, hi), refined by a parabola.
double refined_peak(const UniformGrid& g, const std::vector<double>& rho, std::size_t lo, std::size_t hi) {
  std::size_t best = lo;
  for (std::size_t i = lo; i < hi; ++i) {
    if (rho[i] > rho[best]) best = i;
  }
  if (best == 0 || best + 1 >= rho.size()) return g[best];
  // Vertex of the maximum: same formula on the negated samples.
  return parabolic_vertex(g[best], g.step, -rho[best - 1], -rho[best], -rho[best + 1]);
}

std::optional<double> fitted_minimum(const std::vector<double>& t, const std::vector<double>& y) {
  const auto it = std::min_element(y.begin(), y.end());
  const auto i = static_cast<std::size_t>(it - y.begin());
  if (i == 0 || i + 1 == y.size()) return std::nullopt;
  // Times may be non-uniform; fit the parabola through the three points.
  const double x0 = t[i - 1], x1 = t[i], x2 = t[i + 1];
  const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
  const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
  const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
  if (!(a > 0.0)) return x1;
  return -b / (2.0 * a);
}

}  // namespace

ArrivalReport arrival_diagnostic(const std::vector<Snapshot>& snapshots, double arrival_point,
                                 double window) {
  if (snapshots.size() < 3) throw DomainError("arrival_diagnostic: need at least 3 snapshots");
  if (!(window > 0.0)) throw ValidationError("analysis window must be positive", "window");
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    if (!(snapshots[i].t > snapshots[i - 1].t)) {
      throw DomainError("arrival_diagnostic: snapshots must be strictly increasing in t");
    }
  }
  ArrivalReport report;
  for (const Snapshot& s : snapshots) {
    const UniformGrid& g = s.psi.grid;
    std::vector<double> rho(g.count, 0.0);
    double mass = 0.0, second = 0.0;
    std::size_t first_in = g.count, last_in = 0, centre = g.count;
    for (std::size_t i = 0; i < g.count; ++i) {
      const double x = g[i] - arrival_point;
      if (std::abs(x) > window) continue;
      rho[i] = std::norm(s.psi.values[i]);
      mass += rho[i];
      second += x * x * rho[i];
      first_in = std::min(first_in, i);
      last_in = i;
      if (centre == g.count && x >= 0.0) centre = i;
    }
    if (!(mass > 0.0)) throw DomainError("arrival_diagnostic: no density inside the window");
    report.times.push_back(s.t);
    report.spreads.push_back(second / mass);
    if (centre == g.count) centre = last_in;
    const double left = refined_peak(g, rho, first_in, centre);
    const double right = refined_peak(g, rho, std::min(centre + 1, last_in), last_in + 1);
    report.left_peaks.push_back(left);
    report.right_peaks.push_back(right);
    report.peak_separation.push_back(right - left);
  }
  const auto t_min = fitted_minimum(report.times, report.spreads);
  if (!t_min) {
    throw DomainError("arrival_diagnostic: spread minimum lies at the edge of the time window");
  }
  report.t_min_spread = *t_min;
  report.t_min_separation = fitted_minimum(report.times, report.peak_separation);
  return report;
}

void write_snapshots_csv(std::ostream& out, const std::vector<Snapshot>& snapshots) {
  csv::write_header(out, {"t", "q", "density", "re", "im"});
  for (const Snapshot& s : snapshots) {
    for (std::size_t i = 0; i < s.psi.grid.count; ++i) {
      const Complex v = s.psi.values[i];
      csv::write_row(out, {s.t, s.psi.grid[i], std::norm(v), v.real(), v.imag()});
    }
  }
}

void write_momentum_csv(std::ostream& out, const MomentumFunction& g) {
  csv::write_meta(out, "converging_delta", g.converging_delta);
  csv::write_meta(out, "normalized", g.normalized ? "true" : "false");
  csv::write_header(out, {"p", "re", "im"});
  for (std::size_t i = 0; i < g.grid.count; ++i) {
    csv::write_row(out, {g.grid[i], g.values[i].real(), g.values[i].imag()});
  }
}

}  // namespace reltoa::waves
