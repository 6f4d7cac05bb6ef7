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

#include "reltoa/nystrom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include <lapacke.h>

#include <boost/math/interpolators/makima.hpp>

#include "reltoa/csv.hpp"
#include "reltoa/errors.hpp"
#include "reltoa/parallel.hpp"
#include "reltoa/quadrature.hpp"

namespace reltoa::nystrom {

namespace {

constexpr double kTieTolerance = 1e-10;

// Real part R of the kernel, K = -i R.
double kernel_real(double q, double qp, const PhysicalParams& params) {
  return physcore::time_kernel(q, qp, params).imag() * -1.0;
}

struct HermitianSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;  // columns, empty when not requested
};

// Householder tridiagonalization followed by MRRR on the real tridiagonal
// matrix. Only the eigenvectors inside the window are formed and
// back-transformed.
HermitianSpectrum hermitian_eigen(const Eigen::MatrixXcd& h, bool vectors,
                                  const std::optional<std::pair<double, double>>& window) {
  HermitianSpectrum out;
  const Eigen::Index n = h.rows();
  if (n == 0) return out;
  if (n == 1) {
    const double v = h(0, 0).real();
    if (!window || (v > window->first && v <= window->second)) {
      out.values = Eigen::VectorXd::Constant(1, v);
      if (vectors) out.vectors = Eigen::MatrixXcd::Ones(1, 1);
    }
    return out;
  }

  Eigen::Tridiagonalization<Eigen::MatrixXcd> tri(h);
  Eigen::VectorXd d = tri.diagonal().real();
  Eigen::VectorXd e(n);
  e.head(n - 1) = tri.subDiagonal().real();
  e(n - 1) = 0.0;

  const char jobz = vectors ? 'V' : 'N';
  const char range = window ? 'V' : 'A';
  const double vl = window ? window->first : 0.0;
  const double vu = window ? window->second : 0.0;
  lapack_int m = 0;
  lapack_logical tryrac = 1;
  Eigen::VectorXd w(n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));

  lapack_int nzc = 0;
  if (vectors) {
    double query = 0.0;
    Eigen::VectorXd dq = d, eq = e;
    const lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, jobz, range, n, dq.data(), eq.data(),
                                           vl, vu, 0, 0, &m, w.data(), &query, n, -1,
                                           isuppz.data(), &tryrac);
    if (info != 0) {
      throw ConvergenceError("eigensolve: workspace query failed (info " + std::to_string(info) + ")");
    }
    nzc = std::max<lapack_int>(1, static_cast<lapack_int>(query));
  }
  Eigen::MatrixXd z(vectors ? n : 1, vectors ? nzc : 1);
  const lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, jobz, range, n, d.data(), e.data(), vl,
                                         vu, 0, 0, &m, w.data(), z.data(), vectors ? n : 1,
                                         vectors ? nzc : 0, isuppz.data(), &tryrac);
  if (info != 0) {
    const double norm = h.cwiseAbs().rowwise().sum().maxCoeff();
    throw ConvergenceError("eigensolve: tridiagonal eigensolver failed (info " +
                           std::to_string(info) + ", n " + std::to_string(n) +
                           ", inf-norm " + csv::format(norm) + ")");
  }
  out.values = w.head(m);
  if (vectors && m > 0) {
    Eigen::MatrixXcd zc = z.leftCols(m).cast<std::complex<double>>();
    out.vectors = tri.matrixQ() * zc;
  }
  return out;
}

void finish_mode(EigenMode& mode, const QuadratureGrid& grid) {
  Eigen::VectorXcd& v = mode.vector;
  double norm2 = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) norm2 += grid.weights[k] * std::norm(v(k));
  v /= std::sqrt(norm2);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const std::complex<double> phase = std::abs(v(imax)) / v(imax);
  v *= phase;
  v(imax) = std::abs(v(imax));
}

void sort_modes(std::vector<EigenMode>& modes) {
  std::stable_sort(modes.begin(), modes.end(),
                   [](const EigenMode& a, const EigenMode& b) { return a.tau < b.tau; });
  // Within clusters of ties, list non-nodal first.
  std::size_t start = 0;
  while (start < modes.size()) {
    std::size_t end = start + 1;
    while (end < modes.size() && modes[end].tau - modes[end - 1].tau < kTieTolerance) ++end;
    std::stable_partition(modes.begin() + start, modes.begin() + end, [](const EigenMode& m) {
      return m.parity_class == ParityClass::NonNodal;
    });
    start = end;
  }
}

void require_center(const QuadratureGrid& grid) {
  if (grid.size() % 2 == 0 || grid.nodes[grid.center_index()] != 0.0) {
    throw DomainError("grid has no centre node at q = 0");
  }
}

}  // namespace

QuadratureGrid gauss_legendre_grid(int n_half, double l) {
  if (n_half < 1) throw ValidationError("n_half must be at least 1", "n_half");
  if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("half length must be positive", "l");
  const auto rule = quad::gauss_legendre(2 * n_half + 1);
  QuadratureGrid grid;
  grid.half_length = l;
  grid.nodes.resize(rule.nodes.size());
  grid.weights.resize(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    grid.nodes[k] = l * rule.nodes[k];
    grid.weights[k] = l * rule.weights[k];
  }
  return grid;
}

const char* to_string(ParityClass parity) {
  return parity == ParityClass::NonNodal ? "nonnodal" : "nodal";
}

const char* to_string(InterpolationMethod method) {
  return method == InterpolationMethod::Spline ? "spline" : "nystrom";
}

std::size_t EigenSystem::nearest(double tau, std::optional<ParityClass> parity) const {
  std::size_t best = modes.size();
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (parity && modes[i].parity_class != *parity) continue;
    const double gap = std::abs(modes[i].tau - tau);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  if (best == modes.size()) throw DomainError("nearest: no mode of the requested class");
  return best;
}

Eigen::MatrixXcd build_kernel_matrix(const QuadratureGrid& grid, const PhysicalParams& params) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(worker_count())
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = k + 1; l < n; ++l) {
      const double r = kernel_real(grid.nodes[k], grid.nodes[l], params);
      m(k, l) = {0.0, -r * grid.weights[l]};
      m(l, k) = {0.0, r * grid.weights[k]};
    }
  }
  return m;
}

Eigen::MatrixXcd symmetrize(const Eigen::MatrixXcd& matrix, std::span<const double> weights) {
  const auto n = matrix.rows();
  if (matrix.cols() != n || static_cast<std::size_t>(n) != weights.size()) {
    throw DomainError("symmetrize: matrix and weight sizes differ");
  }
  Eigen::VectorXd s(n);
  for (Eigen::Index k = 0; k < n; ++k) s(k) = std::sqrt(weights[k]);
  return s.asDiagonal() * matrix * s.cwiseInverse().asDiagonal();
}

EigenSystem eigensolve(const Eigen::MatrixXcd& hermitian, const QuadratureGrid& grid,
                       const PhysicalParams& params) {
  const auto n = hermitian.rows();
  if (hermitian.cols() != n || static_cast<std::size_t>(n) != grid.size()) {
    throw DomainError("eigensolve: matrix size does not match the grid");
  }
  const double scale = hermitian.cwiseAbs().maxCoeff();
  const double asym = (hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, std::numeric_limits<double>::min()) * n) {
    throw DomainError("eigensolve: matrix is not Hermitian (max |G - G^H| = " + csv::format(asym) +
                      ")");
  }
  const HermitianSpectrum spec = hermitian_eigen(hermitian, true, std::nullopt);
  EigenSystem sys;
  sys.grid = grid;
  sys.params = params;
  sys.modes.resize(static_cast<std::size_t>(spec.values.size()));
  for (Eigen::Index j = 0; j < spec.values.size(); ++j) {
    EigenMode& mode = sys.modes[j];
    mode.tau = spec.values(j);
    mode.vector.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) mode.vector(k) = spec.vectors(k, j) / std::sqrt(grid.weights[k]);
    finish_mode(mode, grid);
    sys.spectral_radius = std::max(sys.spectral_radius, std::abs(mode.tau));
  }
  return classify_modes(std::move(sys));
}

EigenSystem classify_modes(EigenSystem system, double threshold) {
  if (!(threshold > 0.0 && threshold < 0.5)) {
    throw ValidationError("threshold must lie in (0, 0.5)", "classification_threshold");
  }
  require_center(system.grid);
  if (!system.has_vectors()) throw DomainError("classify_modes: system has no eigenvectors");
  const auto c = static_cast<Eigen::Index>(system.grid.center_index());
  for (EigenMode& mode : system.modes) {
    const double peak = mode.vector.cwiseAbs().maxCoeff();
    mode.center_magnitude = std::abs(mode.vector(c)) / peak;
    mode.parity_class = mode.center_magnitude < threshold ? ParityClass::Nodal : ParityClass::NonNodal;
  }
  sort_modes(system.modes);
  return system;
}

EigenSystem solve_parity_blocks(const QuadratureGrid& grid, const PhysicalParams& params,
                                const BlockSolveOptions& options) {
  require_center(grid);
  if (!(options.classification_threshold > 0.0 && options.classification_threshold < 0.5)) {
    throw ValidationError("threshold must lie in (0, 0.5)", "classification_threshold");
  }
  if (options.tau_window && !(options.tau_window->first < options.tau_window->second)) {
    throw ValidationError("window must satisfy lower < upper", "tau_window");
  }
  const auto c = static_cast<Eigen::Index>(grid.center_index());
  const Eigen::Index nh = c;
  const auto& q = grid.nodes;
  const auto& w = grid.weights;
  const double root2 = std::sqrt(2.0);

  EigenSystem sys;
  sys.grid = grid;
  sys.params = params;

  auto run_block = [&](bool even) {
    const Eigen::Index size = even ? nh + 1 : nh;
    // Even block indexes 0..nh with 0 the centre node; odd block indexes
    // 1..nh stored at 0..nh-1.
    const Eigen::Index off = even ? 0 : 1;
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(size, size);
#pragma omp parallel for schedule(dynamic, 8) num_threads(worker_count())
    for (Eigen::Index jj = 0; jj < size; ++jj) {
      const Eigen::Index j = jj + off;
      for (Eigen::Index kk = 0; kk < jj; ++kk) {
        const Eigen::Index k = kk + off;
        double r = 0.0;
        if (even && k == 0) {
          r = root2 * std::sqrt(w[c + j] * w[c]) * kernel_real(q[c + j], 0.0, params);
        } else {
          const double g_same = std::sqrt(w[c + j] * w[c + k]) * kernel_real(q[c + j], q[c + k], params);
          const double g_mirror = std::sqrt(w[c + j] * w[c - k]) * kernel_real(q[c + j], q[c - k], params);
          r = even ? g_same + g_mirror : g_same - g_mirror;
        }
        b(jj, kk) = {0.0, -r};
        b(kk, jj) = {0.0, r};
      }
    }
    // Diagonal: G(c+j,c+j) = 0 and the mirror term G(c+j,c-j).
    for (Eigen::Index jj = 0; jj < size; ++jj) {
      const Eigen::Index j = jj + off;
      if (j == 0) continue;
      const double g_mirror = w[c + j] * kernel_real(q[c + j], q[c - j], params);
      b(jj, jj) = {0.0, even ? -g_mirror : g_mirror};
    }

    const HermitianSpectrum spec = hermitian_eigen(b, false, std::nullopt);
    for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
      sys.spectral_radius = std::max(sys.spectral_radius, std::abs(spec.values(i)));
    }
    if (!options.vectors && !options.tau_window) {
      for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
        EigenMode mode;
        mode.tau = spec.values(i);
        mode.parity_class = even ? ParityClass::NonNodal : ParityClass::Nodal;
        mode.center_magnitude = std::numeric_limits<double>::quiet_NaN();
        sys.modes.push_back(std::move(mode));
      }
      return;
    }
    const HermitianSpectrum sel = hermitian_eigen(b, options.vectors, options.tau_window);
    const auto n = static_cast<Eigen::Index>(grid.size());
    for (Eigen::Index i = 0; i < sel.values.size(); ++i) {
      EigenMode mode;
      mode.tau = sel.values(i);
      if (!options.vectors) {
        mode.parity_class = even ? ParityClass::NonNodal : ParityClass::Nodal;
        mode.center_magnitude = std::numeric_limits<double>::quiet_NaN();
        sys.modes.push_back(std::move(mode));
        continue;
      }
      Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n);
      if (even) {
        u(c) = sel.vectors(0, i);
        for (Eigen::Index k = 1; k <= nh; ++k) {
          u(c + k) = sel.vectors(k, i) / root2;
          u(c - k) = u(c + k);
        }
      } else {
        for (Eigen::Index k = 1; k <= nh; ++k) {
          u(c + k) = sel.vectors(k - 1, i) / root2;
          u(c - k) = -u(c + k);
        }
      }
      mode.vector.resize(n);
      for (Eigen::Index k = 0; k < n; ++k) mode.vector(k) = u(k) / std::sqrt(w[k]);
      finish_mode(mode, grid);
      const double peak = mode.vector.cwiseAbs().maxCoeff();
      mode.center_magnitude = std::abs(mode.vector(c)) / peak;
      mode.parity_class = mode.center_magnitude < options.classification_threshold
                              ? ParityClass::Nodal
                              : ParityClass::NonNodal;
      sys.modes.push_back(std::move(mode));
    }
  };

  if (options.parity != ParityBlock::Odd) run_block(true);
  if (options.parity != ParityBlock::Even && nh > 0) run_block(false);
  sort_modes(sys.modes);
  return sys;
}

struct EigenfunctionInterpolant::Splines {
  using Spline = boost::math::interpolators::makima<std::vector<double>>;
  Spline re;
  Spline im;
  Splines(std::vector<double> x, std::vector<double> yr, std::vector<double> yi)
      : re(std::vector<double>(x), std::move(yr)), im(std::move(x), std::move(yi)) {}
};

EigenfunctionInterpolant::EigenfunctionInterpolant(const EigenMode& mode, const QuadratureGrid& grid,
                                                   const PhysicalParams& params,
                                                   InterpolationMethod method, double tau_floor)
    : samples_(mode.vector), tau_(mode.tau), grid_(grid), params_(params), method_(method) {
  if (static_cast<std::size_t>(samples_.size()) != grid_.size() || grid_.size() < 4) {
    throw DomainError("interpolant: mode has no samples matching the grid (need at least 4 nodes)");
  }
  if (method_ == InterpolationMethod::Nystrom && !(std::abs(tau_) > tau_floor)) {
    method_ = InterpolationMethod::Spline;
  }
  std::vector<double> yr(grid_.size()), yi(grid_.size());
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    yr[k] = samples_(static_cast<Eigen::Index>(k)).real();
    yi[k] = samples_(static_cast<Eigen::Index>(k)).imag();
  }
  splines_ = std::make_unique<Splines>(grid_.nodes, std::move(yr), std::move(yi));
}

EigenfunctionInterpolant::~EigenfunctionInterpolant() = default;
EigenfunctionInterpolant::EigenfunctionInterpolant(EigenfunctionInterpolant&&) noexcept = default;
EigenfunctionInterpolant& EigenfunctionInterpolant::operator=(EigenfunctionInterpolant&&) noexcept =
    default;

std::complex<double> EigenfunctionInterpolant::operator()(double q) const {
  const double l = grid_.half_length;
  if (!(std::abs(q) <= l)) throw DomainError("interpolant: q lies outside the box [-l, l]");
  if (method_ == InterpolationMethod::Nystrom) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      acc += grid_.weights[k] * physcore::time_kernel(q, grid_.nodes[k], params_) *
             samples_(static_cast<Eigen::Index>(k));
    }
    return acc / tau_;
  }
  const double lo = grid_.nodes.front();
  const double hi = grid_.nodes.back();
  double x = q;
  double dx = 0.0;
  if (q < lo) {
    x = lo;
    dx = q - lo;
  } else if (q > hi) {
    x = hi;
    dx = q - hi;
  }
  const auto& s = *splines_;
  std::complex<double> v(s.re(x), s.im(x));
  if (dx != 0.0) v += dx * std::complex<double>(s.re.prime(x), s.im.prime(x));
  return v;
}

InterpolatedValue interpolate_eigenfunction(const EigenMode& mode, const QuadratureGrid& grid,
                                            double q, const PhysicalParams& params,
                                            InterpolationMethod method) {
  EigenfunctionInterpolant f(mode, grid, params, method);
  return {f(q), f.method()};
}

void write_modes_csv(std::ostream& out, const EigenSystem& system) {
  csv::write_header(out, {"index", "tau", "parity", "center_magnitude"});
  for (std::size_t i = 0; i < system.modes.size(); ++i) {
    const EigenMode& m = system.modes[i];
    out << i << ',' << csv::format(m.tau) << ',' << to_string(m.parity_class) << ','
        << csv::format(m.center_magnitude) << '\n';
  }
}

void write_vectors_csv(std::ostream& out, const EigenSystem& system) {
  out << "node,weight";
  for (std::size_t j = 0; j < system.modes.size(); ++j) out << ",re_" << j << ",im_" << j;
  out << '\n';
  std::vector<double> row;
  for (std::size_t k = 0; k < system.grid.size(); ++k) {
    row.assign({system.grid.nodes[k], system.grid.weights[k]});
    for (const EigenMode& m : system.modes) {
      const auto idx = static_cast<Eigen::Index>(k);
      const std::complex<double> v = idx < m.vector.size() ? m.vector(idx) : std::complex<double>(NAN, NAN);
      row.push_back(v.real());
      row.push_back(v.imag());
    }
    csv::write_row(out, row);
  }
}

}  // namespace reltoa::nystrom
