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
#include <optional>
#include <vector>

#include "reltoa/physcore.hpp"
#include "reltoa/waves.hpp"

namespace reltoa::expectation {

using physcore::PhysicalParams;
using waves::WavepacketSpec;

/// chi1[n] = int dq q |phi^(n)(q)|^2,  chi2[n] = int dq q Im[phi*(q) phi^(2n+1)(q)]
/// for the envelope phi of psi(q) = exp(i p q / hbar) phi(q).
struct MomentSet {
  std::vector<double> chi1;
  std::vector<double> chi2;
  int n_max = 0;
};

/// Closed form for the Gaussian envelope: chi1[n] = q0 Gamma(n+1/2) / (sqrt(pi) (2 sigma^2)^n),
/// chi2 = 0.
MomentSet chi_moments(const WavepacketSpec& spec, int n_max);

/// Spectral (FFT) differentiation of a sampled envelope. The samples must
/// decay to zero at both grid ends. Throws DomainError when the highest
/// quarter of the derivative spectrum carries more than `noise_bound` of its
/// peak, i.e. when the derivative is not resolved.
MomentSet chi_moments(const waves::PositionFunction& envelope, int n_max,
                      double noise_bound = 1e-6);

/// gamma_c^(n)(p) = 1 + (2/pi) int_1^inf dz sqrt(z^2-1)/z Re[(p/(p - i mu c z))^(n+1)].
double gamma_c(int n, double p, const PhysicalParams& params, double rel_tol = 1e-11);

struct SeriesEvaluation {
  std::vector<double> terms;
  std::vector<double> partial_sums;
  /// Index of the smallest-magnitude term; the optimal value is the partial
  /// sum through that term.
  std::size_t optimal_truncation_index = 0;
  double optimal_value = 0.0;
  /// First index from which the term magnitudes increase monotonically up to
  /// n_max; empty when they do not.
  std::optional<std::size_t> diverged_after;
};

SeriesEvaluation evaluate_series(std::vector<double> terms);

/// Asymptotic expansion of the expected TOA in powers of hbar/p.
SeriesEvaluation toa_series(const MomentSet& moments, double p, const PhysicalParams& params,
                            int n_max);

/// -(mu q0 / p) sqrt(1 + p^2 / (mu c)^2).
double classical_rel_toa(double q0, double p, const PhysicalParams& params);
/// Arrival time -q0/c of a light pulse from q0.
double photon_toa(double q0, const PhysicalParams& params);

struct ExactToa {
  double value = 0.0;
  double error = 0.0;
  /// Imaginary part of <psi|T|psi>. Zero by construction: the integrand is
  /// paired under q <-> q' before integration.
  double imaginary_residual = 0.0;
};

/// <psi|T|psi> for the (optionally compactly supported) Gaussian packet, as
///   (mu/hbar) int dQ Q int_0^inf ds T_c(s) Im[psi*(Q + s/2) psi(Q - s/2)]
/// with Q = (q+q')/2, s = q - q'. Nested adaptive Gauss-Kronrod, absolute
/// tolerance tol. Set `relativistic` false for the c -> infinity kernel.
ExactToa toa_exact(const WavepacketSpec& spec, const PhysicalParams& params, double tol = 1e-9,
                   bool relativistic = true);

/// Truncated Q_c series for a Gaussian of width sigma at mean momentum p.
SeriesEvaluation qc_series(double p, double sigma, const PhysicalParams& params, int n_max);

struct BorelParts {
  double q1 = 0.0;
  double q2 = 0.0;
  double prefactor = 1.0;
  double value() const noexcept { return prefactor * (q1 + q2); }
};

/// Borel-resummed quantum correction factor. Q1 is a principal value with
/// its pole at s* = 2 sigma^2 p^2 / hbar^2, handled by subtracting the pole
/// on an interval symmetric about it; Q2 is a nested regular integral.
BorelParts qc_borel_parts(double p, double sigma, const PhysicalParams& params, double tol = 1e-10);
double qc_borel(double p, double sigma, const PhysicalParams& params, double tol = 1e-10);

}  // namespace reltoa::expectation
