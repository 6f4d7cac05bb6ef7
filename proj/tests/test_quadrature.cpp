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

#include "doctest.h"
#include "reltoa/errors.hpp"
#include "reltoa/quadrature.hpp"

using namespace reltoa;

TEST_CASE("three-point Gauss-Legendre rule matches the roots of P3") {
  const auto rule = quad::gauss_legendre(3);
  REQUIRE(rule.nodes.size() == 3);
  CHECK(rule.nodes[0] == doctest::Approx(-std::sqrt(0.6)).epsilon(1e-15));
  CHECK(rule.nodes[1] == 0.0);
  CHECK(rule.nodes[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  CHECK(rule.weights[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(rule.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("Gauss-Legendre rules are symmetric and integrate degree 2n-1 exactly") {
  std::mt19937 rng(20261017);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int n : {2, 5, 12, 33, 101}) {
    const auto rule = quad::gauss_legendre(n);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(rule.nodes[i] == -rule.nodes[n - 1 - i]);
      wsum += rule.weights[i];
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> c(2 * n);
      for (auto& x : c) x = coef(rng);
      double exact = 0.0;
      for (int k = 0; k < 2 * n; k += 2) exact += 2.0 * c[k] / (k + 1);
      double approx = 0.0;
      for (int i = 0; i < n; ++i) {
        double poly = 0.0;
        for (int k = 2 * n - 1; k >= 0; --k) poly = poly * rule.nodes[i] + c[k];
        approx += rule.weights[i] * poly;
      }
      CHECK(approx == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("adaptive integration of smooth and peaked integrands") {
  const auto r = quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-14));
  const auto peak = quad::integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, {0.0, 1e-12, 4000});
  CHECK(peak.value == doctest::Approx(2.0 * std::atan(100.0) * 100.0).epsilon(1e-11));
  const auto tail = quad::integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0);
  CHECK(tail.value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
}

TEST_CASE("integration budget exhaustion is a ConvergenceError") {
  auto wild = [](double x) { return std::sin(1.0 / (x + 1e-12)); };
  CHECK_THROWS_AS(quad::integrate(wild, 0.0, 1.0, {0.0, 1e-14, 20}), ConvergenceError);
  bool converged = true;
  quad::integrate_nothrow(wild, 0.0, 1.0, {0.0, 1e-14, 20}, converged);
  CHECK_FALSE(converged);
}
