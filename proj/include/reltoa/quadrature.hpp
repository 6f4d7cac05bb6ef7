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

#include <cstddef>
#include <functional>
#include <vector>

namespace reltoa::quad {

struct Tolerance {
  double abs = 0.0;
  double rel = 1e-10;
  std::size_t max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod integration on a finite
/// interval. Bisects the interval with the largest error estimate until
/// error <= max(abs, rel * |value|). Throws ConvergenceError when the
/// interval budget is exhausted first.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol = {});

/// Same as integrate() but returns the best estimate instead of throwing;
/// `converged` reports whether the tolerance was met.
Result integrate_nothrow(const std::function<double(double)>& f, double a, double b,
                         const Tolerance& tol, bool& converged);

/// Integral over [a, inf) of a function decaying at least like 1/x^2,
/// mapped through x = a + t/(1-t).
Result integrate_to_infinity(const std::function<double(double)>& f, double a,
                             const Tolerance& tol = {});

struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending, on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule. Nodes are Newton-refined roots of P_n,
/// mirrored so the rule is exactly symmetric; the middle node of an odd
/// rule is exactly 0. Throws ConvergenceError if a root does not settle
/// to 1e-14.
GaussLegendreRule gauss_legendre(int n);

}  // namespace reltoa::quad
