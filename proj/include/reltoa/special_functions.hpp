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

namespace reltoa::physcore {

/// Modified Bessel function of the second kind, K_0 or K_1, for x > 0.
/// Returns 0 once the result underflows (x beyond ~705).
double modified_bessel_K(int order, double x);

/// Modified Struve function L_{-1} or L_0 for x >= 0.
///
/// For x <= struve_crossover the defining power series
///   L_nu(x) = sum_k (x/2)^(2k+nu+1) / (Gamma(k+3/2) Gamma(k+nu+3/2))
/// is summed directly; every term is positive so there is no cancellation.
/// Above the crossover L_nu = I_{-nu} + M_nu with M_nu from its large-x
/// asymptotic expansion truncated at the smallest term.
double modified_struve_L(int order, double x);

inline constexpr double struve_crossover = 30.0;

namespace detail {
/// M_nu(x) = L_nu(x) - I_{-nu}(x) from the asymptotic series; x >= struve_crossover.
double struve_minus_bessel_asymptotic(int order, double x);
}  // namespace detail

}  // namespace reltoa::physcore
