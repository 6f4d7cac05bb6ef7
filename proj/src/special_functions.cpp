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

#include "reltoa/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

#include "reltoa/errors.hpp"

namespace reltoa::physcore {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_order(int order, int lo, int hi, const char* name) {
  if (order < lo || order > hi) {
    throw DomainError(std::string(name) + ": unsupported order " + std::to_string(order));
  }
}

double struve_series(int order, double x) {
  const double half = 0.5 * x;
  const double half2 = half * half;
  // First term and the ratio t_{k+1}/t_k = (x/2)^2 / ((k+3/2)(k+nu+3/2)).
  double term = order == 0 ? half / (0.25 * kPi) : 2.0 / kPi;
  double sum = term;
  for (int k = 0; k < 2000; ++k) {
    const double kk = static_cast<double>(k);
    term *= half2 / ((kk + 1.5) * (kk + order + 1.5));
    sum += term;
    if (term <= kEps * sum && kk > half) return sum;
  }
  return sum;
}

}  // namespace

double modified_bessel_K(int order, double x) {
  check_order(order, 0, 1, "modified_bessel_K");
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("modified_bessel_K: x must be positive and finite, got " + std::to_string(x));
  }
  return boost::math::cyl_bessel_k(order, x);
}

double modified_struve_L(int order, double x) {
  check_order(order, -1, 0, "modified_struve_L");
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("modified_struve_L: x must be non-negative and finite, got " + std::to_string(x));
  }
  if (x <= struve_crossover) return struve_series(order, x);
  return boost::math::cyl_bessel_i(-order, x) + detail::struve_minus_bessel_asymptotic(order, x);
}

namespace detail {

double struve_minus_bessel_asymptotic(int order, double x) {
  check_order(order, -1, 0, "struve_minus_bessel_asymptotic");
  if (!(x >= struve_crossover)) {
    throw DomainError("struve_minus_bessel_asymptotic: x below crossover");
  }
  // nu = 0:  M_0    = -(1/pi^2) sum Gamma(k+1/2)^2            (x/2)^(-2k-1)
  // nu = -1: M_{-1} = +(1/pi^2) sum Gamma(k+1/2)Gamma(k+3/2)  (x/2)^(-2k-2)
  const double inv_half2 = 4.0 / (x * x);
  double term = order == 0 ? kPi * (2.0 / x) : 0.5 * kPi * inv_half2;
  double sum = term;
  double previous = term;
  for (int k = 0; k < 400; ++k) {
    const double kk = static_cast<double>(k);
    const double ratio = order == 0 ? (kk + 0.5) * (kk + 0.5) * inv_half2
                                    : (kk + 0.5) * (kk + 1.5) * inv_half2;
    term *= ratio;
    if (term >= previous || term <= kEps * sum) break;
    sum += term;
    previous = term;
  }
  const double sign = order == 0 ? -1.0 : 1.0;
  return sign * sum / (kPi * kPi);
}

}  // namespace detail
}  // namespace reltoa::physcore
