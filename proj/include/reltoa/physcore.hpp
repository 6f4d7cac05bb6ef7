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

#include <complex>

#include "reltoa/special_functions.hpp"

namespace reltoa::physcore {

/// Mass, speed of light and reduced Planck constant of the particle model.
/// All three must be strictly positive and finite.
class PhysicalParams {
 public:
  PhysicalParams() = default;
  PhysicalParams(double mass, double light_speed, double hbar);

  double mass() const noexcept { return mass_; }
  double light_speed() const noexcept { return light_speed_; }
  double hbar() const noexcept { return hbar_; }

  /// Reduced Compton wavelength hbar/(mu c).
  double compton_length() const noexcept { return hbar_ / (mass_ * light_speed_); }
  /// mu c / hbar, the decay rate of the relativistic kernel correction.
  double inverse_compton_length() const noexcept { return mass_ * light_speed_ / hbar_; }
  /// E_p = sqrt(p^2 c^2 + mu^2 c^4), evaluated without overflow.
  double energy(double p) const noexcept;

 private:
  double mass_ = 1.0;
  double light_speed_ = 1.0;
  double hbar_ = 1.0;
};

/// Kernel density <q|T|q'> in units of time/length. Purely imaginary for
/// real arguments.
using KernelValue = std::complex<double>;

inline constexpr double default_rel_tol = 1e-10;

/// Sign with sgn(0) = 0.
int sgn(double x);

/// T_c = 1 + (2/pi) int_1^inf dz exp(-(mu c/hbar)|dq| z) sqrt(z^2-1)/z,
/// by adaptive quadrature after z = cosh(u). delta_q > 0,
/// rel_tol in (0, 1e-3].
double tc_integral(double delta_q, const PhysicalParams& params,
                   double rel_tol = default_rel_tol);

/// Same quantity from the Bessel/Struve closed form
///   T_c = (2/pi) K1(a) + a K0(a) L_{-1}(a) + a K1(a) L0(a),  a = mu c |dq| / hbar.
/// For a above the Struve crossover the I_nu parts are removed with the
/// Wronskian a (K0 I1 + K1 I0) = 1 so no large products are formed.
double tc_closed(double delta_q, const PhysicalParams& params);

/// Position-space kernel of the relativistic arrival-time operator,
///   (mu / (i hbar)) ((q + q')/4) T_c(|q - q'|) sgn(q - q').
/// Exactly zero on the diagonal.
KernelValue time_kernel(double q, double q_prime, const PhysicalParams& params);

/// The c -> infinity limit of time_kernel (the T_c factor replaced by 1).
KernelValue time_kernel_nonrel(double q, double q_prime, const PhysicalParams& params);

struct PvOracleOptions {
  double p_max = 1200.0;
  int n_points = 16;
  double tolerance = 1e-6;
};

/// Test oracle for the momentum-space representation of the kernel factor:
///   PV int dp exp(i dq p / hbar) (1/p) sqrt(1 + p^2/(mu c)^2) / (2 pi hbar).
/// The p < 0 half is folded onto p > 0 (the pole cancels), a Gaussian
/// convergence factor exp(-eps p^2) regularizes the non-decaying tail, and
/// the eps -> 0 limit is taken by Richardson extrapolation. Throws
/// ConvergenceError when the extrapolation disagrees with itself by more
/// than `tolerance`.
std::complex<double> pv_momentum_kernel_oracle(double delta_q, const PhysicalParams& params,
                                               const PvOracleOptions& options = {});

}  // namespace reltoa::physcore
