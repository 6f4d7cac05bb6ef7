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

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "reltoa/errors.hpp"
#include "reltoa/waves.hpp"

using namespace reltoa;
using namespace reltoa::waves;

namespace {
const PhysicalParams unit;
}

TEST_CASE("uniform grids") {
  const auto g = UniformGrid::span(-1.0, 3.0, 5);
  CHECK(g[4] == 3.0);
  CHECK(g.step == 1.0);
  CHECK(g.max_abs() == 3.0);
  const auto s = UniformGrid::symmetric(2.0, 9);
  CHECK(s[4] == 0.0);
  CHECK(s.stop() == 2.0);
  CHECK_THROWS_AS(UniformGrid::symmetric(2.0, 8), ValidationError);
  CHECK_THROWS_AS(UniformGrid::span(1.0, 0.0, 5), ValidationError);
}

TEST_CASE("wavepacket validation names the field") {
  WavepacketSpec bad{-3.0, 5.0, -1.0, std::nullopt};
  try {
    bad.validate();
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "sigma");
  }
  WavepacketSpec support{-3.0, 5.0, 0.5, 0.0};
  CHECK_THROWS_AS(support.validate(), ValidationError);
}

TEST_CASE("Gaussian packet: unit norm in position and momentum, closed form matches transform") {
  const WavepacketSpec spec{-3.0, 5.0, 0.5, std::nullopt};
  const auto q = UniformGrid::span(-10.0, 4.0, 2801);
  const auto p = UniformGrid::symmetric(30.0, 3001);
  const auto psi = gaussian_position(spec, q, unit);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const auto closed = gaussian_momentum(spec, p, unit);
  CHECK(closed.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const auto numeric = to_momentum(psi, p, unit);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(numeric.values[i] - closed.values[i]));
  CHECK(worst < 1e-10);
  // |psi~(p)| peaks at p0 with width 1/(2 sigma).
  CHECK(std::abs(gaussian_momentum_value(spec, 5.0, unit)) ==
        doctest::Approx(std::pow(2.0 * 0.25 / std::numbers::pi, 0.25)).epsilon(1e-14));
}

TEST_CASE("compactly supported packet: unit norm, zero outside, momentum transform agrees") {
  const WavepacketSpec spec{-3.0, 7.0, 0.5, 2.0};
  const auto q = UniformGrid::span(-6.0, 0.0, 6001);
  const auto psi = gaussian_position(spec, q, unit);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gaussian_position_value(spec, -5.5, unit) == Complex(0.0, 0.0));
  CHECK(gaussian_position_value(spec, -0.5, unit) == Complex(0.0, 0.0));
  const auto p = UniformGrid::symmetric(200.0, 4001);
  const auto g = gaussian_momentum(spec, p, unit);
  CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-4));
  const auto numeric = to_momentum(psi, p, unit);
  for (std::size_t i = 1800; i < 2400; i += 37) {
    CHECK(std::abs(numeric.values[i] - g.values[i]) < 1e-5);
  }
}

TEST_CASE("grid coverage and sampling checks") {
  const WavepacketSpec spec{-3.0, 5.0, 0.5, std::nullopt};
  CHECK_THROWS_AS(gaussian_position(spec, UniformGrid::span(-4.0, 0.0, 401), unit), DomainError);
  CHECK_THROWS_AS(check_sampling(UniformGrid::span(-1.0, 1.0, 11), UniformGrid::symmetric(100.0, 201), unit),
                  DomainError);
  CHECK_NOTHROW(check_sampling(UniformGrid::span(-1.0, 1.0, 2001), UniformGrid::symmetric(100.0, 201), unit));
}

TEST_CASE("free evolution is unitary and the packet drifts at the group velocity") {
  const WavepacketSpec spec{-3.0, 2.0, 0.5, std::nullopt};
  const auto p = UniformGrid::symmetric(30.0, 3001);
  const auto g = gaussian_momentum(spec, p, unit);
  const auto moved = evolve(g, 1.5, unit);
  CHECK(moved.norm() == doctest::Approx(g.norm()).epsilon(1e-13));
  const auto q = UniformGrid::span(-8.0, 4.0, 1201);
  const auto psi = to_position(g, q, unit, 1.5);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-6));
  double mean = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    mean += q[i] * std::norm(psi.values[i]);
    mass += std::norm(psi.values[i]);
  }
  // Free evolution: d<q>/dt = <p c^2 / E_p> exactly.
  double velocity = 0.0, weight = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    velocity += p[i] / unit.energy(p[i]) * std::norm(g.values[i]);
    weight += std::norm(g.values[i]);
  }
  CHECK(mean / mass == doctest::Approx(-3.0 + velocity / weight * 1.5).epsilon(1e-6));
  // Round trip at t = 0.
  const auto back = to_position(g, q, unit, 0.0);
  CHECK(std::abs(back.values[500] - gaussian_position_value(spec, q[500], unit)) < 1e-10);
}

TEST_CASE("complex-eigenvalue eigenfunctions: normalizable only for Im tau > 0") {
  const auto p = UniformGrid::symmetric(60.0, 6001);
  const auto up = razavi_complex_eigenfunction(p, {1.0, 1.0}, unit);
  CHECK(up.normalized);
  CHECK(up.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const auto down = razavi_complex_eigenfunction(p, {1.0, -1.0}, unit);
  CHECK_FALSE(down.normalized);
  CHECK(std::abs(down.values.back()) > std::abs(down.values[3001]));
}

TEST_CASE("real-eigenvalue eigenfunctions: explicit values and epsilon validation") {
  const double p = 1.3, tau = 0.8, eps = 0.1;
  const double e = std::sqrt(1.0 + p * p);
  const Complex expected = std::sqrt(1.0 / (std::numbers::pi * eps)) * (std::sin(eps * e) / e) *
                           std::sqrt(p / e) * std::polar(1.0, e * tau);
  CHECK(std::abs(razavi_real_value(p, tau, eps, unit) - expected) < 1e-14);
  CHECK_THROWS_AS(razavi_real_value(p, tau, 0.0, unit), ValidationError);
  const Complex nn = nonnodal_value(-p, tau, unit);
  CHECK(std::abs(nn - std::sqrt(1.0 / (4.0 * std::numbers::pi)) * std::sqrt(p / e) * std::polar(1.0, e * tau)) <
        1e-14);
  const auto grid = UniformGrid::symmetric(2.0, 5);
  const auto nd = nodal_eigenfunction(grid, tau, unit);
  const auto nn_g = nonnodal_eigenfunction(grid, tau, unit);
  CHECK(nd.values[0] == -nn_g.values[0]);
  CHECK(nd.values[2] == Complex(0.0, 0.0));
  CHECK(nd.values[4] == nn_g.values[4]);
}

TEST_CASE("parabolic vertex recovers the minimum of a sampled parabola") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double x_star = u(rng), a = 1.0 + u(rng) * 0.5, h = 0.1;
    const double x0 = x_star + 0.4 * h * u(rng);
    auto f = [&](double x) { return a * (x - x_star) * (x - x_star) + 2.0; };
    CHECK(parabolic_vertex(x0, h, f(x0 - h), f(x0), f(x0 + h)) == doctest::Approx(x_star).epsilon(1e-12));
  }
}

TEST_CASE("analytic eigenfunctions arrive at their eigenvalue") {
  const double tau = 1.0;
  const auto p = UniformGrid::symmetric(300.0, 6001);
  const auto q = UniformGrid::span(-1.5, 1.5, 301);
  auto evolve_all = [&](MomentumFunction g) {
    g.converging_delta = 0.001;
    std::vector<Snapshot> snaps;
    for (int i = 0; i <= 40; ++i) snaps.push_back({0.05 * i, to_position(g, q, unit, 0.05 * i)});
    return snaps;
  };
  const auto nn = arrival_diagnostic(evolve_all(nonnodal_eigenfunction(p, tau, unit)), 0.0, 1.0);
  CHECK(nn.t_min_spread == doctest::Approx(tau).epsilon(0.05));
  const auto nd = arrival_diagnostic(evolve_all(nodal_eigenfunction(p, tau, unit)), 0.0, 1.0);
  REQUIRE(nd.t_min_separation.has_value());
  CHECK(*nd.t_min_separation == doctest::Approx(tau).epsilon(0.05));
  std::ostringstream out;
  write_snapshots_csv(out, evolve_all(nonnodal_eigenfunction(p, tau, unit)));
  CHECK(out.str().rfind("t,q,density,re,im\n", 0) == 0);
}

TEST_CASE("arrival diagnostic rejects minima at the edge of the time window") {
  const auto p = UniformGrid::symmetric(300.0, 6001);
  const auto q = UniformGrid::span(-1.5, 1.5, 301);
  auto g = nonnodal_eigenfunction(p, 3.0, unit);
  g.converging_delta = 0.001;
  std::vector<Snapshot> snaps;
  for (int i = 0; i <= 10; ++i) snaps.push_back({0.1 * i, to_position(g, q, unit, 0.1 * i)});
  CHECK_THROWS_AS(arrival_diagnostic(snaps, 0.0, 1.0), DomainError);
}
