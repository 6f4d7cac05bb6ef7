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

#include "reltoa/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "reltoa/errors.hpp"
#include "reltoa/quadrature.hpp"

namespace reltoa::expectation {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGaussianReach = 9.0;  // sigmas kept on each side of q0
constexpr double kGaussTail = 6.5;      // exp(-x^2) below 1e-18 beyond this

void require_nonzero_p(double p, const char* where) {
  if (!(p != 0.0) || !std::isfinite(p)) throw DomainError(std::string(where) + ": p must be finite and non-zero");
}

// 1/sqrt(pi) Gamma(n + 1/2) for n = 0..n_max.
std::vector<double> half_gamma_ratios(int n_max) {
  std::vector<double> g(static_cast<std::size_t>(n_max) + 1);
  g[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) g[n] = g[n - 1] * (n - 0.5);
  return g;
}

}  // namespace

MomentSet chi_moments(const WavepacketSpec& spec, int n_max) {
  spec.validate();
  if (n_max < 0) throw ValidationError("n_max must be non-negative", "n_max");
  MomentSet m;
  m.n_max = n_max;
  const auto g = half_gamma_ratios(n_max);
  const double inv = 1.0 / (2.0 * spec.sigma * spec.sigma);
  double power = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    m.chi1.push_back(spec.q0 * g[n] * power);
    m.chi2.push_back(0.0);
    power *= inv;
  }
  return m;
}

MomentSet chi_moments(const waves::PositionFunction& envelope, int n_max, double noise_bound) {
  if (n_max < 0) throw ValidationError("n_max must be non-negative", "n_max");
  const std::size_t n = envelope.grid.count;
  if (n < 8 || envelope.values.size() != n) throw DomainError("chi_moments: envelope needs at least 8 samples");
  const double h = envelope.grid.step;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, envelope.values);
  std::vector<double> k(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double jj = j < (n + 1) / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    k[j] = 2.0 * kPi * jj / (static_cast<double>(n) * h);
  }
  const double k_nyquist = kPi / h;

  const int max_order = std::max(n_max, 2 * n_max + 1);
  std::vector<std::vector<std::complex<double>>> derivs(static_cast<std::size_t>(max_order) + 1);
  for (int order = 0; order <= max_order; ++order) {
    std::vector<std::complex<double>> d(n);
    double peak = 0.0, tail = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      std::complex<double> factor = std::pow(std::complex<double>(0.0, k[j]), order);
      if (n % 2 == 0 && j == n / 2 && order % 2 == 1) factor = 0.0;
      d[j] = factor * spectrum[j];
      const double mag = std::abs(d[j]);
      peak = std::max(peak, mag);
      if (std::abs(k[j]) >= 0.75 * k_nyquist) tail = std::max(tail, mag);
    }
    if (order > 0 && tail > noise_bound * peak) {
      throw DomainError("chi_moments: derivative of order " + std::to_string(order) +
                        " is not resolved by the sampling (spectral tail ratio " +
                        std::to_string(tail / peak) + ")");
    }
    std::vector<std::complex<double>> out;
    fft.inv(out, d);
    derivs[order] = std::move(out);
  }

  MomentSet m;
  m.n_max = n_max;
  for (int order = 0; order <= n_max; ++order) {
    double c1 = 0.0, c2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double q = envelope.grid[j];
      c1 += q * std::norm(derivs[order][j]);
      c2 += q * (std::conj(envelope.values[j]) * derivs[2 * order + 1][j]).imag();
    }
    m.chi1.push_back(c1 * h);
    m.chi2.push_back(c2 * h);
  }
  return m;
}

double gamma_c(int n, double p, const PhysicalParams& params, double rel_tol) {
  require_nonzero_p(p, "gamma_c");
  if (n < 0) throw ValidationError("n must be non-negative", "n");
  const double mc = params.mass() * params.light_speed();
  auto integrand = [&](double u) {
    if (u > 300.0) return 0.0;
    const double z = std::cosh(u);
    const double sh = std::sinh(u);
    const std::complex<double> ratio = p / std::complex<double>(p, -mc * z);
    std::complex<double> power = ratio;
    for (int i = 0; i < n; ++i) power *= ratio;
    return sh * sh / z * power.real();
  };
  const auto r = quad::integrate_to_infinity(integrand, 0.0, {1e-15, rel_tol, 8000});
  return 1.0 + 2.0 / kPi * r.value;
}

SeriesEvaluation evaluate_series(std::vector<double> terms) {
  SeriesEvaluation s;
  s.terms = std::move(terms);
  double acc = 0.0;
  for (double t : s.terms) {
    acc += t;
    s.partial_sums.push_back(acc);
  }
  if (s.terms.empty()) return s;
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.terms.size(); ++i) {
    if (std::abs(s.terms[i]) < std::abs(s.terms[best])) best = i;
  }
  s.optimal_truncation_index = best;
  s.optimal_value = s.partial_sums[best];
  if (s.terms.size() >= 2) {
    std::size_t start = s.terms.size() - 1;
    while (start > 0 && std::abs(s.terms[start]) > std::abs(s.terms[start - 1])) --start;
    if (start + 1 < s.terms.size()) s.diverged_after = start;
  }
  return s;
}

SeriesEvaluation toa_series(const MomentSet& moments, double p, const PhysicalParams& params,
                            int n_max) {
  require_nonzero_p(p, "toa_series");
  if (n_max < 0 || n_max > moments.n_max) {
    throw ValidationError("n_max must lie in [0, moments.n_max]", "n_max");
  }
  const double mu = params.mass();
  const double hbar = params.hbar();
  std::vector<double> terms;
  for (int n = 0; n <= n_max; ++n) {
    const double r = std::pow(hbar / p, 2 * n);
    double term = -mu * r / p * gamma_c(2 * n, p, params) * moments.chi1[n];
    if (moments.chi2[n] != 0.0) {
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      term += mu * sign * r * hbar / (p * p) * gamma_c(2 * n + 1, p, params) * moments.chi2[n];
    }
    terms.push_back(term);
  }
  return evaluate_series(std::move(terms));
}

double classical_rel_toa(double q0, double p, const PhysicalParams& params) {
  require_nonzero_p(p, "classical_rel_toa");
  const double mc = params.mass() * params.light_speed();
  return -(params.mass() * q0 / p) * std::hypot(1.0, p / mc);
}

double photon_toa(double q0, const PhysicalParams& params) { return -q0 / params.light_speed(); }

ExactToa toa_exact(const WavepacketSpec& spec, const PhysicalParams& params, double tol,
                   bool relativistic) {
  spec.validate();
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive", "tol");
  double lo = spec.q0 - kGaussianReach * spec.sigma;
  double hi = spec.q0 + kGaussianReach * spec.sigma;
  if (spec.support_half_width) {
    lo = std::max(lo, spec.q0 - *spec.support_half_width);
    hi = std::min(hi, spec.q0 + *spec.support_half_width);
  }
  const double scale = params.mass() / params.hbar();
  const double q_abs = std::max(std::abs(lo), std::abs(hi));
  const quad::Tolerance inner_tol{0.01 * tol / (scale * q_abs * (hi - lo)), 1e-12, 20000};

  auto inner = [&](double Q) {
    const double s_max = 2.0 * std::min(Q - lo, hi - Q);
    if (!(s_max > 0.0)) return 0.0;
    auto f = [&](double s) {
      const std::complex<double> a = waves::gaussian_position_value(spec, Q + 0.5 * s, params);
      const std::complex<double> b = waves::gaussian_position_value(spec, Q - 0.5 * s, params);
      const double im = (std::conj(a) * b).imag();
      if (im == 0.0) return 0.0;
      return (relativistic ? physcore::tc_closed(s, params) : 1.0) * im;
    };
    return Q * quad::integrate(f, 0.0, s_max, inner_tol).value;
  };
  const quad::Tolerance outer_tol{tol / scale, 0.0, 4000};
  const auto left = quad::integrate(inner, lo, spec.q0, {0.5 * outer_tol.abs, 0.0, 4000});
  const auto right = quad::integrate(inner, spec.q0, hi, {0.5 * outer_tol.abs, 0.0, 4000});
  ExactToa out;
  out.value = scale * (left.value + right.value);
  out.error = scale * (left.error + right.error);
  return out;
}

SeriesEvaluation qc_series(double p, double sigma, const PhysicalParams& params, int n_max) {
  require_nonzero_p(p, "qc_series");
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive", "sigma");
  if (n_max < 0) throw ValidationError("n_max must be non-negative", "n_max");
  const double mc = params.mass() * params.light_speed();
  const double prefactor = 1.0 / std::hypot(1.0, p / mc);
  const auto g = half_gamma_ratios(n_max);
  const double x = params.hbar() * params.hbar() / (2.0 * sigma * sigma * p * p);
  std::vector<double> terms;
  double power = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    terms.push_back(prefactor * power * g[n] * gamma_c(2 * n, p, params));
    power *= x;
  }
  return evaluate_series(std::move(terms));
}

BorelParts qc_borel_parts(double p, double sigma, const PhysicalParams& params, double tol) {
  require_nonzero_p(p, "qc_borel");
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive", "sigma");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive", "tol");
  const double ap = std::abs(p);
  const double xs = std::sqrt(2.0) * sigma * ap / params.hbar();
  if (!(xs * xs > 1e3 * std::numeric_limits<double>::epsilon())) {
    throw DomainError("qc_borel: pole s* = 2 sigma^2 p^2 / hbar^2 is too close to the origin");
  }
  const double mc = params.mass() * params.light_speed();
  const double two_over_sqrt_pi = 2.0 / std::sqrt(kPi);

  // Q1 = (2/sqrt pi) PV int_0^inf exp(-x^2) / (1 - x^2/xs^2) dx written as
  // PV int g(x) / (xs - x) with g(x) = exp(-x^2) xs^2 / (xs + x).
  auto g = [xs](double x) { return std::exp(-x * x) * xs * xs / (xs + x); };
  const double g_pole = g(xs);
  const double dg_pole = -std::exp(-xs * xs) * xs * xs * (1.0 + 0.25 / (xs * xs));
  auto regular = [&](double x) {
    const double d = xs - x;
    if (std::abs(d) < 1e-7 * xs) return -dg_pole;
    return (g(x) - g_pole) / d;
  };
  const quad::Tolerance q1_tol{0.1 * tol, 1e-13, 8000};
  double q1 = quad::integrate(regular, 0.0, 2.0 * xs, q1_tol).value;
  q1 += quad::integrate([&](double x) { return g(x) / (xs - x); }, 2.0 * xs, 2.0 * xs + kGaussTail, q1_tol).value;
  q1 *= two_over_sqrt_pi;

  const double beta = mc / ap;
  auto inner = [&](double z) {
    const std::complex<double> w = 1.0 / std::complex<double>(1.0, -beta * z);
    const std::complex<double> w2 = w * w;
    auto f = [&](double x) {
      return std::exp(-x * x) * (w / (1.0 - w2 * (x * x / (xs * xs)))).real();
    };
    return two_over_sqrt_pi * quad::integrate(f, 0.0, kGaussTail, {1e-16, 1e-12, 8000}).value;
  };
  auto outer = [&](double u) {
    if (u > 300.0) return 0.0;
    const double z = std::cosh(u);
    const double sh = std::sinh(u);
    return sh * sh / z * inner(z);
  };
  const double q2 = 2.0 / kPi * quad::integrate_to_infinity(outer, 0.0, {0.1 * tol, 0.1 * tol, 8000}).value;

  BorelParts parts;
  parts.q1 = q1;
  parts.q2 = q2;
  parts.prefactor = 1.0 / std::hypot(1.0, ap / mc);
  return parts;
}

double qc_borel(double p, double sigma, const PhysicalParams& params, double tol) {
  return qc_borel_parts(p, sigma, params, tol).value();
}

}  // namespace reltoa::expectation
