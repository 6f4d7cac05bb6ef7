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

#include "reltoa/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "reltoa/config.hpp"
#include "reltoa/expectation.hpp"
#include "reltoa/nystrom.hpp"
#include "reltoa/physcore.hpp"
#include "reltoa/scenarios.hpp"
#include "reltoa/toadist.hpp"
#include "reltoa/waves.hpp"

namespace reltoa::app {

namespace {

using physcore::PhysicalParams;
using waves::UniformGrid;
using waves::WavepacketSpec;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

// Eigenvalue near 0.9944 on [-1,1]. The even block is enough: the target mode is
// non-nodal, and the tau window keeps MRRR to a handful of eigenvalues.
Outcome fig1_eigenvalue() {
  const PhysicalParams params;
  const double target = 0.9944;
  const int nodes = 6401;
  nystrom::BlockSolveOptions opts;
  opts.parity = nystrom::ParityBlock::Even;
  opts.vectors = false;
  opts.tau_window = std::make_pair(target - 0.05, target + 0.05);
  const auto system = nystrom::solve_parity_blocks(nystrom::gauss_legendre_grid(nodes / 2, 1.0), params, opts);
  double best = std::nan("");
  for (const auto& m : system.modes) {
    if (std::isnan(best) || std::abs(m.tau - target) < std::abs(best - target)) best = m.tau;
  }
  const bool ok = !std::isnan(best) && std::abs(best - target) <= 1e-2;
  return {ok, "nodes=" + std::to_string(nodes) + " closest tau=" + fmt(best, 8) + " |diff|=" +
                  fmt(std::abs(best - target), 3)};
}

Outcome kernel_dual_path() {
  const PhysicalParams params;
  double worst = 0.0;
  const int n = 61;
  for (int i = 0; i < n; ++i) {
    const double a = 1e-3 * std::pow(3e4, static_cast<double>(i) / (n - 1));
    const double closed = physcore::tc_closed(a, params);
    const double integral = physcore::tc_integral(a, params, 1e-12);
    worst = std::max(worst, std::abs(closed - integral) / std::abs(integral));
  }
  double worst_pv = 0.0;
  for (double dq : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
    const auto oracle = physcore::pv_momentum_kernel_oracle(dq, params);
    const std::complex<double> expected(0.0, physcore::tc_closed(std::abs(dq), params) * physcore::sgn(dq) / 2.0);
    worst_pv = std::max(worst_pv, std::abs(oracle - expected));
  }
  return {worst <= 1e-8 && worst_pv <= 1e-4,
          "max rel closed/integral=" + fmt(worst, 3) + " max |oracle-expected|=" + fmt(worst_pv, 3)};
}

Outcome gamma_identity() {
  const PhysicalParams params;
  double worst = 0.0;
  for (double p : {0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double expected = std::sqrt(1.0 + p * p);
    worst = std::max(worst, std::abs(expectation::gamma_c(0, p, params) - expected) / expected);
  }
  return {worst <= 1e-10, "max rel error=" + fmt(worst, 3)};
}

Outcome exact_vs_borel() {
  const PhysicalParams params;
  double worst = 0.0;
  std::string detail;
  for (double p : {2.0, 3.0, 5.0, 8.0, 10.0}) {
    const WavepacketSpec spec{-3.0, p, 0.5, std::nullopt};
    const double exact = expectation::toa_exact(spec, params).value;
    const double borel = expectation::classical_rel_toa(-3.0, p, params) * expectation::qc_borel(p, 0.5, params);
    const double rel = std::abs(exact - borel) / std::abs(exact);
    worst = std::max(worst, rel);
    detail += "p=" + fmt(p) + ":" + fmt(exact, 8) + " ";
  }
  return {worst <= 1e-3, detail + "max rel=" + fmt(worst, 3)};
}

Outcome compact_bounds() {
  const PhysicalParams params;
  const double p = 7.0, sigma = 0.5;
  const double qc = expectation::qc_borel(p, sigma, params);
  const double lower = expectation::classical_rel_toa(-1.0, p, params) * qc;
  const double upper = expectation::classical_rel_toa(-5.0, p, params) * qc;
  const bool bounds_ok = std::abs(lower - 1.011) <= 0.005 * 1.011 && std::abs(upper - 5.054) <= 0.005 * 5.054;
  const WavepacketSpec spec{-3.0, p, sigma, 2.0};
  const auto dist = toadist::dist_analytic(spec, UniformGrid::span(0.25, 8.0, 1551), params,
                                           UniformGrid::symmetric(240.0, 9601));
  const double inside = toadist::mass_between(dist, 1.011 * 0.99, 5.054 * 1.01);
  return {bounds_ok && inside >= 0.98,
          "bounds=" + fmt(lower) + "," + fmt(upper) + " mass inside=" + fmt(inside)};
}

Outcome photon_bound() {
  const PhysicalParams params;
  bool above = true;
  double closest = 1e300;
  for (int i = 0; i <= 90; ++i) {
    const double p = 1e-3 * std::pow(10.0, i / 10.0);
    const double t = expectation::classical_rel_toa(-3.0, p, params);
    above = above && t > 3.0;
    closest = std::min(closest, t - 3.0);
  }
  const double at_1e3 = expectation::classical_rel_toa(-3.0, 1e3, params);
  const bool limit = std::abs(at_1e3 - 3.0) <= 1e-5;
  return {above && limit, "min(t-3) over p in [1e-3,1e6]=" + fmt(closest, 3) + " t(p=1e3)-3=" + fmt(at_1e3 - 3.0, 3)};
}

// The nearest representable pair to 0.9944 is the top of the spectrum, whose
// eigenvalue depends on the node count; the property is checked against the
// evolved mode's own eigenvalue.
Outcome unitary_arrival() {
  const PhysicalParams params;
  config::GridSettings grid;
  grid.half_length = 1.0;
  grid.nodes = 401;
  const config::EvolveSettings ev;  // t in [0,2], q in [-1.5,1.5], p in [-300,300], delta 1e-3
  const auto system = solve_grid(grid, params, nystrom::ParityBlock::Both, std::make_pair(0.8, 1.1), true);
  using nystrom::ParityClass;
  const auto& nn = system.modes[system.nearest(0.9944, ParityClass::NonNodal)];
  const auto& nd = system.modes[system.nearest(0.9944, ParityClass::Nodal)];
  const auto rep_nn = waves::arrival_diagnostic(propagate(coarse_mode_momentum(nn, system, ev), ev, params), 0.0, ev.window);
  const auto rep_nd = waves::arrival_diagnostic(propagate(coarse_mode_momentum(nd, system, ev), ev, params), 0.0, ev.window);
  const double err_nn = std::abs(rep_nn.t_min_spread - nn.tau) / nn.tau;
  const double t_sep = rep_nd.t_min_separation.value_or(std::nan(""));
  const double err_nd = std::abs(t_sep - nd.tau) / nd.tau;
  return {err_nn <= 0.05 && err_nd <= 0.05,
          "non-nodal tau=" + fmt(nn.tau) + " t_min=" + fmt(rep_nn.t_min_spread) + "; nodal tau=" + fmt(nd.tau) +
              " t_closest=" + fmt(t_sep)};
}

Outcome translation() {
  const PhysicalParams params;
  const WavepacketSpec spec{-3.0, 2.0, 0.5, std::nullopt};
  const auto tau_grid = UniformGrid::span(1.0, 8.0, 701);
  const auto p_grid = UniformGrid::symmetric(30.0, 6001);
  const double t = 1.0;
  const auto moved = toadist::dist_translated(spec, t, tau_grid, params, p_grid);
  UniformGrid shifted = tau_grid;
  shifted.start += t;
  auto reference = toadist::dist_analytic(spec, shifted, params, p_grid);
  reference.tau_grid = tau_grid;  // compare as functions of the original tau
  const double l1 = toadist::l1_distance(moved, reference);
  return {l1 <= 1e-3, "L1=" + fmt(l1, 3)};
}

Outcome coarse_vs_analytic() {
  const PhysicalParams params;
  const WavepacketSpec spec{-3.0, 5.0, 0.5, std::nullopt};
  const int nodes = 3201;
  const auto tau_grid = UniformGrid::span(1.0, 6.0, 501);
  nystrom::BlockSolveOptions opts;
  opts.parity = nystrom::ParityBlock::Even;
  opts.tau_window = std::make_pair(0.5, 6.5);
  const auto system = nystrom::solve_parity_blocks(nystrom::gauss_legendre_grid(nodes / 2, 10.0), params, opts);
  const auto coarse = toadist::dist_coarse(spec, system, tau_grid);
  const auto analytic = toadist::dist_analytic(spec, tau_grid, params, UniformGrid::symmetric(30.0, 6001));
  const double l1 = toadist::l1_distance(coarse, analytic);
  return {l1 <= 0.05, "nodes=" + std::to_string(nodes) + " L1=" + fmt(l1, 4)};
}

Outcome razavi_flattening() {
  const PhysicalParams params;
  const WavepacketSpec spec{-3.0, 3.0, 0.5, std::nullopt};
  const auto tau_grid = UniformGrid::span(0.5, 8.0, 751);
  const auto p_grid = UniformGrid::symmetric(30.0, 6001);
  std::vector<double> maxima;
  for (double eps : {0.5, 0.1, 0.02}) {
    maxima.push_back(toadist::max_density_raw(toadist::dist_razavi_real(spec, tau_grid, eps, params, p_grid)));
  }
  const bool ok = maxima[0] > maxima[1] && maxima[1] > maxima[2];
  return {ok, "max density at eps 0.5,0.1,0.02 = " + fmt(maxima[0]) + "," + fmt(maxima[1]) + "," + fmt(maxima[2])};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "eigenvalue near 0.9944 on [-1,1]", fig1_eigenvalue},
      {2, "T_c closed form vs integral, momentum-space oracle", kernel_dual_path},
      {3, "gamma^(0) identity", gamma_identity},
      {4, "exact expectation vs Borel t*Q_c", exact_vs_borel},
      {5, "compact-support bounds and mass", compact_bounds},
      {6, "photon bound", photon_bound},
      {7, "unitary arrival of coarse modes", unitary_arrival},
      {8, "translation covariance", translation},
      {9, "coarse vs analytic distribution", coarse_vs_analytic},
      {10, "Razavi-real flattening", razavi_flattening},
  };
  return all;
}

}  // namespace

int acceptance_criterion_count() { return static_cast<int>(criteria().size()); }

std::vector<CriterionResult> run_acceptance(std::ostream& log, const std::vector<int>& ids) {
  std::vector<CriterionResult> results;
  for (const Criterion& c : criteria()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    CriterionResult r{c.id, c.title, false, {}, 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.run();
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.title << ": " << r.detail << " ("
        << fmt(r.seconds, 3) << " s)" << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace reltoa::app
