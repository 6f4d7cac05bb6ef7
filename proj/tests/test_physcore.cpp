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
#include "reltoa/physcore.hpp"
#include "reltoa/quadrature.hpp"
#include "reltoa/special_functions.hpp"

using namespace reltoa;
using namespace reltoa::physcore;

namespace {

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt
double bessel_k_oracle(int nu, double x) {
  auto f = [&](double t) {
    const double e = -x * std::cosh(t);
    if (e < -700.0) return 0.0;
    return 0.5 * (std::exp(e + nu * t) + std::exp(e - nu * t));
  };
  return quad::integrate_to_infinity(f, 0.0, {0.0, 1e-13, 4000}).value;
}

// Defining series, summed independently of the library.
double struve_series_oracle(int nu, double x) {
  double sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double log_term = (2 * k + nu + 1) * std::log(x / 2) - std::lgamma(k + 1.5) - std::lgamma(k + nu + 1.5);
    sum += std::exp(log_term);
  }
  return sum;
}

// L0(x) = (2/pi) int_0^{pi/2} sinh(x cos t) dt
double struve_l0_quadrature(double x) {
  return 2.0 / std::numbers::pi *
         quad::integrate([&](double t) { return std::sinh(x * std::cos(t)); }, 0.0, std::numbers::pi / 2,
                         {0.0, 1e-14, 4000})
             .value;
}

}  // namespace

TEST_CASE("parameters must be positive and finite") {
  CHECK_NOTHROW(PhysicalParams(1.0, 1.0, 1.0));
  CHECK_THROWS_AS(PhysicalParams(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(PhysicalParams(1.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(PhysicalParams(1.0, 1.0, std::nan("")), DomainError);
  const PhysicalParams p(2.0, 3.0, 0.5);
  CHECK(p.energy(4.0) == doctest::Approx(std::sqrt(16.0 * 9.0 + 4.0 * 81.0)));
  CHECK(p.compton_length() == doctest::Approx(0.5 / 6.0));
}

TEST_CASE("modified Bessel K against its integral representation") {
  for (double x : {1e-3, 0.1, 0.5, 1.0, 3.0, 10.0, 40.0}) {
    for (int nu : {0, 1}) {
      CHECK(modified_bessel_K(nu, x) == doctest::Approx(bessel_k_oracle(nu, x)).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(modified_bessel_K(0, 0.0), DomainError);
}

TEST_CASE("modified Struve L against series and quadrature") {
  CHECK(modified_struve_L(-1, 0.0) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(modified_struve_L(0, 0.0) == 0.0);
  for (double x : {1e-3, 0.3, 1.0, 5.0, 12.0, 25.0}) {
    CHECK(modified_struve_L(-1, x) == doctest::Approx(struve_series_oracle(-1, x)).epsilon(1e-12));
    CHECK(modified_struve_L(0, x) == doctest::Approx(struve_series_oracle(0, x)).epsilon(1e-12));
    CHECK(modified_struve_L(0, x) == doctest::Approx(struve_l0_quadrature(x)).epsilon(1e-11));
  }
  // Across the switch to the asymptotic branch.
  for (double x : {29.9, 30.1, 45.0, 60.0}) {
    CHECK(modified_struve_L(0, x) == doctest::Approx(struve_series_oracle(0, x)).epsilon(1e-11));
    CHECK(modified_struve_L(-1, x) == doctest::Approx(struve_series_oracle(-1, x)).epsilon(1e-11));
  }
}

TEST_CASE("T_c closed form agrees with the defining integral on a log grid") {
  const PhysicalParams params;
  for (int i = 0; i <= 60; ++i) {
    const double a = 1e-3 * std::pow(3e4, i / 60.0);
    CHECK(tc_closed(a, params) == doctest::Approx(tc_integral(a, params, 1e-12)).epsilon(1e-10));
  }
  // Scaling: T_c depends on mu c |dq| / hbar only.
  const PhysicalParams other(2.0, 3.0, 1.5);
  CHECK(tc_closed(0.7, other) == doctest::Approx(tc_closed(0.7 * 4.0, params)).epsilon(1e-13));
}

TEST_CASE("T_c limits") {
  const PhysicalParams params;
  // Far apart the correction dies off exponentially.
  CHECK(tc_closed(60.0, params) == doctest::Approx(1.0).epsilon(1e-14));
  // Close together it is dominated by (2/pi) K1(a) ~ 2/(pi a).
  const double a = 1e-6;
  CHECK(tc_closed(a, params) * a == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-5));
  CHECK_THROWS_AS(tc_closed(0.0, params), DomainError);
  CHECK_THROWS_AS(tc_integral(-1.0, params), DomainError);
}

TEST_CASE("time kernel: zero diagonal, Hermitian, parity symmetric, non-relativistic limit") {
  const PhysicalParams params;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double q = u(rng), qp = u(rng);
    const auto k = time_kernel(q, qp, params);
    CHECK(k.real() == 0.0);
    CHECK(std::abs(time_kernel(qp, q, params) - std::conj(k)) <= 1e-14 * std::abs(k));
    CHECK(std::abs(time_kernel(-q, -qp, params) - k) <= 1e-14 * std::abs(k));
  }
  CHECK(time_kernel(0.3, 0.3, params) == std::complex<double>(0.0, 0.0));
  const PhysicalParams fast(1.0, 1e4, 1.0);
  const auto rel = time_kernel(-1.0, 0.5, fast);
  const auto nonrel = time_kernel_nonrel(-1.0, 0.5, fast);
  CHECK(rel.imag() == doctest::Approx(nonrel.imag()).epsilon(1e-6));
}

TEST_CASE("momentum-space oracle reproduces (i / 2 hbar) T_c sgn") {
  const PhysicalParams params;
  for (double dq : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
    const auto oracle = pv_momentum_kernel_oracle(dq, params);
    const double expected = tc_closed(std::abs(dq), params) * sgn(dq) / 2.0;
    CHECK(oracle.real() == 0.0);
    CHECK(std::abs(oracle.imag() - expected) <= 1e-4);
  }
  // Too short a truncation cannot meet the tolerance.
  CHECK_THROWS_AS(pv_momentum_kernel_oracle(0.5, params, {100.0, 16, 1e-9}), ConvergenceError);
  CHECK_THROWS_AS(pv_momentum_kernel_oracle(0.0, params), DomainError);
}
