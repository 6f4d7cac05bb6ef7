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

#include "reltoa/physcore.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "reltoa/errors.hpp"
#include "reltoa/quadrature.hpp"

namespace reltoa::physcore {
namespace {

constexpr double kPi = std::numbers::pi;

// Above this value exp(-a cosh u) underflows everywhere on the integration
// range and T_c - 1 is below double precision.
constexpr double kTcSaturation = 745.0;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

PhysicalParams::PhysicalParams(double mass, double light_speed, double hbar)
    : mass_(mass), light_speed_(light_speed), hbar_(hbar) {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string("PhysicalParams: ") + name + " must be positive and finite");
    }
  };
  check(mass, "mass");
  check(light_speed, "light_speed");
  check(hbar, "hbar");
  if (!std::isfinite(compton_length()) || !(compton_length() > 0.0) ||
      !std::isfinite(inverse_compton_length()) || !(inverse_compton_length() > 0.0)) {
    throw DomainError("PhysicalParams: hbar/(mu c) is not representable");
  }
}

double PhysicalParams::energy(double p) const noexcept {
  return light_speed_ * std::hypot(p, mass_ * light_speed_);
}

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

double tc_integral(double delta_q, const PhysicalParams& params, double rel_tol) {
  if (!(delta_q > 0.0) || !std::isfinite(delta_q)) {
    throw DomainError("tc_integral: delta_q must be positive (the integral diverges at 0)");
  }
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) {
    throw DomainError("tc_integral: rel_tol must lie in (0, 1e-3]");
  }
  const double a = params.inverse_compton_length() * delta_q;
  if (a >= kTcSaturation) return 1.0;

  // z = cosh u:  dz sqrt(z^2-1)/z = sinh^2(u)/cosh(u) du, no endpoint singularity.
  auto integrand = [a](double u) {
    const double c = std::cosh(u);
    const double s = std::sinh(u);
    return std::exp(-a * c) * s * s / c;
  };
  const double u_max = std::acosh(std::max(1.0 + 1e-12, kTcSaturation / a));
  quad::Tolerance tol;
  tol.rel = 0.1 * rel_tol;
  tol.abs = 0.1 * rel_tol * 0.5 * kPi;
  tol.max_intervals = 2000;
  const quad::Result r = quad::integrate(integrand, 0.0, u_max, tol);
  return 1.0 + (2.0 / kPi) * r.value;
}

double tc_closed(double delta_q, const PhysicalParams& params) {
  if (!(delta_q > 0.0) || !std::isfinite(delta_q)) {
    throw DomainError("tc_closed: delta_q must be positive");
  }
  const double a = params.inverse_compton_length() * delta_q;
  if (a >= kTcSaturation) return 1.0;
  const double k0 = modified_bessel_K(0, a);
  const double k1 = modified_bessel_K(1, a);
  if (a <= struve_crossover) {
    return (2.0 / kPi) * k1 + a * k0 * modified_struve_L(-1, a) + a * k1 * modified_struve_L(0, a);
  }
  const double m_minus1 = detail::struve_minus_bessel_asymptotic(-1, a);
  const double m_0 = detail::struve_minus_bessel_asymptotic(0, a);
  return 1.0 + (2.0 / kPi) * k1 + a * (k0 * m_minus1 + k1 * m_0);
}

KernelValue time_kernel(double q, double q_prime, const PhysicalParams& params) {
  require_finite(q, "time_kernel: q");
  require_finite(q_prime, "time_kernel: q'");
  const int s = sgn(q - q_prime);
  if (s == 0) return {0.0, 0.0};
  const double tc = tc_closed(std::abs(q - q_prime), params);
  // mu/(i hbar) = -i mu/hbar
  return {0.0, -params.mass() / params.hbar() * 0.25 * (q + q_prime) * tc * s};
}

KernelValue time_kernel_nonrel(double q, double q_prime, const PhysicalParams& params) {
  require_finite(q, "time_kernel_nonrel: q");
  require_finite(q_prime, "time_kernel_nonrel: q'");
  const int s = sgn(q - q_prime);
  return {0.0, -params.mass() / params.hbar() * 0.25 * (q + q_prime) * s};
}

std::complex<double> pv_momentum_kernel_oracle(double delta_q, const PhysicalParams& params,
                                               const PvOracleOptions& options) {
  if (delta_q == 0.0 || !std::isfinite(delta_q)) {
    throw DomainError("pv_momentum_kernel_oracle: delta_q must be non-zero");
  }
  if (!(options.p_max > 0.0) || options.n_points < 2) {
    throw DomainError("pv_momentum_kernel_oracle: need p_max > 0 and n_points >= 2");
  }
  const double hbar = params.hbar();
  const double k = std::abs(delta_q) / hbar;
  const double mc = params.mass() * params.light_speed();
  const quad::GaussLegendreRule rule = quad::gauss_legendre(options.n_points);

  // exp(-eps p_max^2) = exp(-36) at the finest level.
  const double eps0 = 36.0 / (options.p_max * options.p_max);
  const double panel = kPi / k;
  const auto panels = static_cast<long>(std::ceil(options.p_max / panel));

  // Odd integrand folded onto p > 0:
  //   (1/(2 pi hbar)) int_R e^{ikp} h(p) dp = (i/(pi hbar)) int_0^inf sin(kp) h(p) dp.
  auto folded = [&](double eps) {
    double sum = 0.0;
    for (long j = 0; j < panels; ++j) {
      const double lo = j * panel;
      const double half = 0.5 * panel;
      const double mid = lo + half;
      double part = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double p = mid + half * rule.nodes[i];
        part += rule.weights[i] * std::sin(k * p) * std::hypot(1.0, p / mc) / p *
                std::exp(-eps * p * p);
      }
      sum += half * part;
    }
    return sum;
  };

  std::array<double, 3> level{};
  for (int i = 0; i < 3; ++i) level[i] = folded(eps0 * std::pow(4.0, i));
  // Leading regularization error is linear in eps.
  const double r01 = (4.0 * level[0] - level[1]) / 3.0;
  const double r12 = (4.0 * level[1] - level[2]) / 3.0;
  const double richardson = (16.0 * r01 - r12) / 15.0;
  // Error of the final value estimated by its distance to the previous extrapolant.
  const double tail = std::abs(richardson - r01);
  if (tail / kPi > options.tolerance) {
    throw ConvergenceError("pv_momentum_kernel_oracle: tail estimate " + std::to_string(tail / kPi) +
                           " exceeds tolerance; increase p_max");
  }
  const double magnitude = richardson / (kPi * hbar);
  return {0.0, magnitude * sgn(delta_q)};
}

}  // namespace reltoa::physcore
