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
#include <random>
#include <sstream>

#include "doctest.h"
#include "reltoa/errors.hpp"
#include "reltoa/nystrom.hpp"

using namespace reltoa;
using namespace reltoa::nystrom;

namespace {

const PhysicalParams unit;

// Shared small problem: 101 nodes on [-1, 1].
const EigenSystem& full_system() {
  static const EigenSystem s = [] {
    const auto g = gauss_legendre_grid(50, 1.0);
    return eigensolve(symmetrize(build_kernel_matrix(g, unit), g.weights), g, unit);
  }();
  return s;
}

}  // namespace

TEST_CASE("grid is odd, symmetric, has a centre node and integrates constants") {
  const auto g = gauss_legendre_grid(20, 3.0);
  REQUIRE(g.size() == 41);
  CHECK(g.nodes[g.center_index()] == 0.0);
  double w = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.nodes[i] == -g.nodes[g.size() - 1 - i]);
    w += g.weights[i];
  }
  CHECK(w == doctest::Approx(6.0).epsilon(1e-13));
  CHECK_THROWS_AS(gauss_legendre_grid(0, 1.0), ValidationError);
  CHECK_THROWS_AS(gauss_legendre_grid(5, -1.0), ValidationError);
}

TEST_CASE("Nystrom matrix: zero diagonal and a Hermitian symmetrization") {
  const auto g = gauss_legendre_grid(15, 1.0);
  const auto m = build_kernel_matrix(g, unit);
  for (Eigen::Index i = 0; i < m.rows(); ++i) CHECK(m(i, i) == std::complex<double>(0.0, 0.0));
  const auto h = symmetrize(m, g.weights);
  CHECK((h - h.adjoint()).norm() <= 1e-14 * h.norm());
}

TEST_CASE("eigenpairs satisfy the discrete eigenvalue problem with weighted normalization") {
  const auto& s = full_system();
  const auto m = build_kernel_matrix(s.grid, unit);
  REQUIRE(s.modes.size() == s.grid.size());
  for (std::size_t j = 0; j < s.modes.size(); j += 7) {
    const auto& mode = s.modes[j];
    CHECK((m * mode.vector - mode.tau * mode.vector).norm() <= 1e-10 * s.spectral_radius);
    double n = 0.0;
    for (std::size_t k = 0; k < s.grid.size(); ++k) n += s.grid.weights[k] * std::norm(mode.vector(k));
    CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (std::size_t j = 1; j < s.modes.size(); ++j) CHECK(s.modes[j - 1].tau <= s.modes[j].tau);
}

TEST_CASE("spectrum is symmetric and the modes come in parity pairs") {
  const auto& s = full_system();
  const std::size_t n = s.modes.size();
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(s.modes[j].tau == doctest::Approx(-s.modes[n - 1 - j].tau).epsilon(1e-10));
  }
  std::size_t nodal = 0;
  for (const auto& m : s.modes) {
    if (m.parity_class == ParityClass::Nodal) {
      ++nodal;
      CHECK(m.center_magnitude < 1e-10);
    } else {
      CHECK(m.center_magnitude > 1e-6);
    }
  }
  CHECK(nodal == s.grid.n_half());
}

TEST_CASE("parity blocks reproduce the full eigenvalues") {
  const auto& s = full_system();
  const auto blocks = solve_parity_blocks(s.grid, unit);
  REQUIRE(blocks.modes.size() == s.modes.size());
  for (std::size_t j = 0; j < s.modes.size(); ++j) {
    CHECK(blocks.modes[j].tau == doctest::Approx(s.modes[j].tau).epsilon(1e-12));
    CHECK(blocks.modes[j].parity_class == s.modes[j].parity_class);
  }
  CHECK(blocks.spectral_radius == doctest::Approx(s.spectral_radius).epsilon(1e-12));
}

TEST_CASE("windowed block solve returns exactly the modes inside the window") {
  const auto& s = full_system();
  BlockSolveOptions opts;
  opts.tau_window = std::make_pair(0.2, 0.8);
  const auto w = solve_parity_blocks(s.grid, unit, opts);
  std::size_t expected = 0;
  for (const auto& m : s.modes) expected += (m.tau > 0.2 && m.tau <= 0.8) ? 1 : 0;
  REQUIRE(w.modes.size() == expected);
  const auto m = build_kernel_matrix(s.grid, unit);
  for (const auto& mode : w.modes) {
    CHECK(mode.tau > 0.2);
    CHECK(mode.tau <= 0.8);
    CHECK((m * mode.vector - mode.tau * mode.vector).norm() <= 1e-10 * s.spectral_radius);
  }
  opts.vectors = false;
  opts.parity = ParityBlock::Odd;
  const auto odd = solve_parity_blocks(s.grid, unit, opts);
  for (const auto& mode : odd.modes) CHECK(mode.parity_class == ParityClass::Nodal);
  CHECK_FALSE(odd.has_vectors());
}

TEST_CASE("classification threshold must lie in (0, 0.5)") {
  CHECK_THROWS_AS(classify_modes(full_system(), 0.0), ValidationError);
  CHECK_THROWS_AS(classify_modes(full_system(), 0.7), ValidationError);
}

TEST_CASE("nearest respects the parity filter") {
  const auto& s = full_system();
  const auto i = s.nearest(0.5, ParityClass::Nodal);
  CHECK(s.modes[i].parity_class == ParityClass::Nodal);
  for (const auto& m : s.modes) {
    if (m.parity_class == ParityClass::Nodal) CHECK(std::abs(m.tau - 0.5) >= std::abs(s.modes[i].tau - 0.5));
  }
}

TEST_CASE("spline interpolant: exact at nodes, parity preserved, bounded to the box") {
  const auto& s = full_system();
  const auto& nn = s.modes[s.nearest(0.6, ParityClass::NonNodal)];
  const auto& nd = s.modes[s.nearest(0.6, ParityClass::Nodal)];
  const EigenfunctionInterpolant f(nn, s.grid, unit);
  const EigenfunctionInterpolant h(nd, s.grid, unit);
  for (std::size_t k = 0; k < s.grid.size(); k += 9) {
    CHECK(std::abs(f(s.grid.nodes[k]) - nn.vector(static_cast<Eigen::Index>(k))) <= 1e-12);
  }
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double q = u(rng);
    CHECK(std::abs(f(q) - f(-q)) <= 1e-10 * std::abs(f(q)) + 1e-12);
    CHECK(std::abs(h(q) + h(-q)) <= 1e-10 * std::abs(h(q)) + 1e-12);
  }
  CHECK(std::abs(h(0.0)) <= 1e-12);
  CHECK_THROWS_AS(f(1.5), DomainError);
  CHECK(f.method() == InterpolationMethod::Spline);
}

TEST_CASE("Nystrom extension reproduces the node samples") {
  const auto& s = full_system();
  const auto& nn = s.modes[s.nearest(0.6, ParityClass::NonNodal)];
  for (std::size_t k = 3; k < s.grid.size(); k += 17) {
    const auto v = interpolate_eigenfunction(nn, s.grid, s.grid.nodes[k], unit, InterpolationMethod::Nystrom);
    CHECK(v.method == InterpolationMethod::Nystrom);
    CHECK(std::abs(v.value - nn.vector(static_cast<Eigen::Index>(k))) <= 1e-8);
  }
}

TEST_CASE("CSV bundles") {
  const auto& s = full_system();
  std::ostringstream modes, vectors;
  write_modes_csv(modes, s);
  write_vectors_csv(vectors, s);
  CHECK(modes.str().rfind("index,tau,parity,center_magnitude\n", 0) == 0);
  CHECK(vectors.str().rfind("node,weight,re_0,im_0,", 0) == 0);
  std::size_t lines = 0;
  for (char c : modes.str()) lines += c == '\n';
  CHECK(lines == s.modes.size() + 1);
}
