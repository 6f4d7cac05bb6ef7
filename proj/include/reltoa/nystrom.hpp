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
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reltoa/physcore.hpp"

namespace reltoa::nystrom {

using physcore::PhysicalParams;

/// Gauss-Legendre nodes and weights on [-l, l]. The point count is always
/// odd (2 n_half + 1) so that q = 0 is a node.
struct QuadratureGrid {
  double half_length = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  std::size_t center_index() const noexcept { return nodes.size() / 2; }
  std::size_t n_half() const noexcept { return nodes.size() / 2; }
};

QuadratureGrid gauss_legendre_grid(int n_half, double l);

enum class ParityClass { NonNodal, Nodal };

const char* to_string(ParityClass parity);

struct EigenMode {
  double tau = 0.0;
  /// Node samples normalized so that sum_k w_k |v_k|^2 = 1, phase fixed so
  /// the largest-magnitude component is real and positive. Empty when the
  /// system was solved for eigenvalues only.
  Eigen::VectorXcd vector;
  ParityClass parity_class = ParityClass::NonNodal;
  /// |v(q=0)| / max_k |v_k|; NaN when no vector was computed.
  double center_magnitude = 0.0;
};

struct EigenSystem {
  QuadratureGrid grid;
  PhysicalParams params;
  std::vector<EigenMode> modes;  // sorted by tau, ties non-nodal first
  double spectral_radius = 0.0;

  bool has_vectors() const noexcept { return !modes.empty() && modes.front().vector.size() > 0; }
  /// Index of the mode with tau closest to `tau`, optionally restricted to a class.
  std::size_t nearest(double tau, std::optional<ParityClass> parity = std::nullopt) const;
};

/// Nystrom matrix M_kl = w_l <q_k|T|q_l>. Diagonal is exactly zero.
Eigen::MatrixXcd build_kernel_matrix(const QuadratureGrid& grid, const PhysicalParams& params);

/// Similarity transform diag(sqrt w) M diag(1/sqrt w), which is Hermitian
/// because the kernel is.
Eigen::MatrixXcd symmetrize(const Eigen::MatrixXcd& matrix, std::span<const double> weights);

inline constexpr double default_classification_threshold = 1e-6;

/// Full dense eigendecomposition of the symmetrized matrix. Eigenvectors are
/// mapped back to node samples, normalized in the weighted norm, and
/// classified with the default threshold.
EigenSystem eigensolve(const Eigen::MatrixXcd& hermitian, const QuadratureGrid& grid,
                       const PhysicalParams& params);

/// Tag each mode Nodal when |v(0)|/max|v| < threshold. The grid must have a
/// centre node and the system must carry eigenvectors.
EigenSystem classify_modes(EigenSystem system, double threshold = default_classification_threshold);

enum class ParityBlock { Even, Odd, Both };

struct BlockSolveOptions {
  ParityBlock parity = ParityBlock::Both;
  bool vectors = true;
  /// Restrict to eigenvalues in (first, second]. Uses a tridiagonal
  /// reduction followed by MRRR on the selected range, so the cost of
  /// eigenvectors is only paid for the modes that are kept.
  std::optional<std::pair<double, double>> tau_window;
  double classification_threshold = default_classification_threshold;
};

/// Eigenanalysis on a symmetric grid using the parity symmetry
/// <-q|T|-q'> = <q|T|q'>. The even block carries the non-nodal modes and the
/// odd block the nodal ones; each block is a quarter of the full matrix.
EigenSystem solve_parity_blocks(const QuadratureGrid& grid, const PhysicalParams& params,
                                const BlockSolveOptions& options = {});

enum class InterpolationMethod { Spline, Nystrom };

const char* to_string(InterpolationMethod method);

struct InterpolatedValue {
  std::complex<double> value;
  InterpolationMethod method;
};

/// Continuous reconstruction of a coarse-grained eigenfunction on [-l, l].
///
/// Spline: modified-Akima cubic through the node samples (exact at nodes),
/// continued linearly from the outermost nodes to the box edges.
/// Nystrom: the natural extension (1/tau) sum_l w_l K(q, q_l) v_l. Because
/// the kernel is Cauchy-singular this is only well behaved at the nodes; it
/// falls back to the spline when |tau| is below `tau_floor`.
class EigenfunctionInterpolant {
 public:
  EigenfunctionInterpolant(const EigenMode& mode, const QuadratureGrid& grid,
                           const PhysicalParams& params,
                           InterpolationMethod method = InterpolationMethod::Spline,
                           double tau_floor = 1e-8);
  ~EigenfunctionInterpolant();
  EigenfunctionInterpolant(EigenfunctionInterpolant&&) noexcept;
  EigenfunctionInterpolant& operator=(EigenfunctionInterpolant&&) noexcept;

  InterpolationMethod method() const noexcept { return method_; }
  std::complex<double> operator()(double q) const;

 private:
  struct Splines;
  Eigen::VectorXcd samples_;
  double tau_;
  QuadratureGrid grid_;
  PhysicalParams params_;
  InterpolationMethod method_;
  std::unique_ptr<Splines> splines_;
};

InterpolatedValue interpolate_eigenfunction(const EigenMode& mode, const QuadratureGrid& grid,
                                            double q, const PhysicalParams& params,
                                            InterpolationMethod method = InterpolationMethod::Spline);

/// CSV bundle: (index, tau, parity, center_magnitude).
void write_modes_csv(std::ostream& out, const EigenSystem& system);
/// CSV bundle: node, weight, then re_j, im_j for every mode j.
void write_vectors_csv(std::ostream& out, const EigenSystem& system);

}  // namespace reltoa::nystrom
