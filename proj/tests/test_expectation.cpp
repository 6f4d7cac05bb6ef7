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
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "reltoa/errors.hpp"
#include "reltoa/expectation.hpp"
#include "reltoa/quadrature.hpp"

using namespace reltoa;
using namespace reltoa::expectation;

namespace {

const PhysicalParams unit;

// Direct quadrature in z of the defining integral.
double gamma_oracle(int n, double p, double mc) {
  auto f = [&](double z) {
    const std::complex<double> ratio = p / std::complex<double>(p, -mc * z);
    return std::sqrt(z * z - 1.0) / z * std::pow(ratio, n + 1).real();
  };
  return 1.0 + 2.0 / std::numbers::pi * quad::integrate_to_infinity(f, 1.0, {0.0, 1e-12, 8000}).value;
}

}  // namespace

TEST_CASE("gamma^(0) equals sqrt(1 + p^2 / (mu c)^2)") {
  for (double p : {0.5, 1.0, 2.0, 5.0, 20.0}) {
    CHECK(gamma_c(0, p, unit) == doctest::Approx(std::sqrt(1.0 + p * p)).epsilon(1e-10));
  }
  const PhysicalParams heavy(2.0, 3.0, 1.0);
  CHECK(gamma_c(0, 4.0, heavy) == doctest::Approx(std::sqrt(1.0 + 16.0 / 36.0)).epsilon(1e-10));
}

TEST_CASE("higher gamma factors against direct quadrature") {
  for (int n : {1, 2, 3, 6}) {
    for (double p : {0.7, 2.0, 9.0}) {
      CHECK(gamma_c(n, p, unit) == doctest::Approx(gamma_oracle(n, p, 1.0)).epsilon(1e-8));
    }
  }
}

TEST_CASE("chi moments: closed form against spectral differentiation") {
  const waves::WavepacketSpec spec{-3.0, 0.0, 0.5, std::nullopt};
  const auto closed = chi_moments(spec, 6);
  CHECK(closed.chi1[0] == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(closed.chi1[1] == doctest::Approx(-3.0 * 0.5 / 0.5).epsilon(1e-14));
  // p0 = 0, so the sampled packet is its own envelope.
  // Moderate sampling: high-order spectral derivatives amplify round-off
  // by k_nyquist^(2n+1), which the guard also reports.
  const auto grid = waves::UniformGrid::span(-9.0, 3.0, 256);
  const auto envelope = waves::gaussian_position(spec, grid, unit);
  const auto numeric = chi_moments(envelope, 3);
  for (int n = 0; n <= 3; ++n) {
    CHECK(numeric.chi1[n] == doctest::Approx(closed.chi1[n]).epsilon(1e-8));
    CHECK(std::abs(numeric.chi2[n]) < 1e-8 * std::abs(closed.chi1[n]) + 1e-12);
  }
  // A grid too coarse to resolve the derivatives trips the spectral guard.
  const auto coarse = waves::gaussian_position(spec, waves::UniformGrid::span(-9.0, 3.0, 40), unit);
  CHECK_THROWS_AS(chi_moments(coarse, 3), DomainError);
  CHECK_THROWS_AS(chi_moments(waves::gaussian_position(spec, waves::UniformGrid::span(-9.0, 3.0, 1024), unit), 6),
                  DomainError);
}

TEST_CASE("series evaluation: optimal truncation and divergence onset") {
  const auto s = evaluate_series({1.0, 0.5, 0.25, -0.5, 1.0, 2.0});
  CHECK(s.optimal_truncation_index == 2);
  CHECK(s.optimal_value == doctest::Approx(1.75));
  REQUIRE(s.diverged_after.has_value());
  CHECK(*s.diverged_after == 2);
  CHECK(s.partial_sums.back() == doctest::Approx(4.25));
  const auto convergent = evaluate_series({1.0, 0.1, 0.01, 0.001});
  CHECK_FALSE(convergent.diverged_after.has_value());
  CHECK(convergent.optimal_truncation_index == 3);
}

TEST_CASE("classical arrival time stays above the photon bound") {
  CHECK(photon_toa(-3.0, unit) == 3.0);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> logp(-3.0, 6.0);
  for (int i = 0; i < 500; ++i) {
    const double p = std::pow(10.0, logp(rng));
    CHECK(classical_rel_toa(-3.0, p, unit) > 3.0);
  }
  CHECK(classical_rel_toa(-3.0, 1e3, unit) == doctest::Approx(3.0).epsilon(1e-5));
  // Non-relativistic regime: mu |q0| / p.
  CHECK(classical_rel_toa(-3.0, 1e-3, unit) == doctest::Approx(3e3).epsilon(1e-6));
}

TEST_CASE("exact expectation equals t * Q_c from the resummed series") {
  for (double p : {2.0, 5.0, 10.0}) {
    const waves::WavepacketSpec spec{-3.0, p, 0.5, std::nullopt};
    const auto exact = toa_exact(spec, unit);
    CHECK(exact.imaginary_residual == 0.0);
    const double borel = classical_rel_toa(-3.0, p, unit) * qc_borel(p, 0.5, unit);
    CHECK(exact.value == doctest::Approx(borel).epsilon(1e-8));
  }
  // Frozen reference (derived with this implementation).
  const waves::WavepacketSpec five{-3.0, 5.0, 0.5, std::nullopt};
  CHECK(toa_exact(five, unit).value == doctest::Approx(3.0683212).epsilon(1e-7));
}

TEST_CASE("exact expectation approaches the non-relativistic kernel as c grows") {
  const PhysicalParams fast(1.0, 200.0, 1.0);
  const waves::WavepacketSpec spec{-3.0, 2.0, 0.5, std::nullopt};
  const double rel = toa_exact(spec, fast, 1e-9, true).value;
  const double nonrel = toa_exact(spec, fast, 1e-9, false).value;
  CHECK(rel == doctest::Approx(nonrel).epsilon(1e-3));
}

TEST_CASE("Q_c tends to one for large momentum and for wide packets") {
  CHECK(qc_borel(100.0, 0.5, unit) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(qc_borel(5.0, 50.0, unit) == doctest::Approx(1.0).epsilon(1e-4));
  const auto parts = qc_borel_parts(5.0, 0.5, unit);
  CHECK(parts.value() == doctest::Approx(qc_borel(5.0, 0.5, unit)).epsilon(1e-14));
}

TEST_CASE("truncated Q_c series sits next to the resummed value") {
  const auto s = qc_series(7.0, 0.5, unit, 40);
  CHECK(s.optimal_truncation_index == 25);
  CHECK(s.optimal_value == doctest::Approx(1.00067955).epsilon(1e-8));
  CHECK(s.optimal_value == doctest::Approx(qc_borel(7.0, 0.5, unit)).epsilon(1e-5));
}

TEST_CASE("compact-support bounds at the support end points") {
  const double qc = qc_borel(7.0, 0.5, unit);
  CHECK(classical_rel_toa(-1.0, 7.0, unit) * qc == doctest::Approx(1.010839).epsilon(1e-6));
  CHECK(classical_rel_toa(-5.0, 7.0, unit) * qc == doctest::Approx(5.054195).epsilon(1e-6));
  const waves::WavepacketSpec compact{-3.0, 7.0, 0.5, 2.0};
  const double tau = toa_exact(compact, unit).value;
  CHECK(tau == doctest::Approx(3.03244120).epsilon(1e-7));
  CHECK(tau > 1.010839);
  CHECK(tau < 5.054195);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS(gamma_c(-1, 1.0, unit));
  CHECK_THROWS(qc_borel(0.0, 0.5, unit));
  CHECK_THROWS(toa_exact({-3.0, 2.0, -0.5, std::nullopt}, unit));
}
