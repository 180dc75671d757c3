// SPDX-License-Identifier: Apache-2.0
//
// diffcap: classical capacities of diffraction-limited optical links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "diffcap/core.hpp"

namespace diffcap {

// ---------------------------------------------------------------------------
// Pupil
// ---------------------------------------------------------------------------

enum class PupilShape { Circular, Slit, Rectangular };

std::string_view to_string(PupilShape shape) noexcept;

/// Aperture of the refocusing element, centred on the optical axis. Extents
/// are physical lengths in meters; a zero extent gives a closed pupil.
class Pupil {
 public:
  static Pupil circular(double radius);
  /// Infinitely long slit of width 2 * half_width (one transverse axis).
  static Pupil slit(double half_width);
  static Pupil rectangular(double half_width_x, double half_width_y);

  PupilShape shape() const noexcept { return shape_; }
  /// 1 for a slit, 2 otherwise.
  int dimension() const noexcept { return shape_ == PupilShape::Slit ? 1 : 2; }
  double extent_x() const noexcept { return extent_x_; }
  double extent_y() const noexcept { return extent_y_; }
  bool is_closed() const noexcept { return extent_x_ == 0.0 || extent_y_ == 0.0; }

  /// Characteristic function P(r): true strictly inside the aperture.
  bool contains(double x, double y = 0.0) const noexcept;

 private:
  Pupil(PupilShape shape, double ex, double ey) : shape_(shape), extent_x_(ex), extent_y_(ey) {}

  PupilShape shape_;
  double extent_x_;
  double extent_y_;
};

/// Quadrature nodes covering a pupil, in units of the pupil scale R
/// (r~ = r / R). For a slit only `x` is used.
struct PupilRule {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> weight;

  std::size_t size() const noexcept { return weight.size(); }
};

/// Tensor Gauss-Legendre rule with `order` nodes per axis. Circular pupils
/// use the boundary-fitted substitution x = rho sin(theta) with a
/// Gauss-Legendre rule along each chord, so the aperture edge is resolved
/// exactly.
PupilRule pupil_rule(const Pupil& pupil, double scale, std::size_t order);

// ---------------------------------------------------------------------------
// Mode grid
// ---------------------------------------------------------------------------

using ModeIndex = std::array<int, 2>;

/// Truncated set of transverse-momentum mode indices, each component in
/// [-n_max, n_max]. Row-major ordering, last axis fastest.
class ModeGrid {
 public:
  static constexpr int kMaxCutoff2d = 64;

  ModeGrid(int dimension, int n_max);

  /// Smallest grid with n_max >= ceil(safety * ratio), and at least 1.
  static ModeGrid for_ratio(int dimension, double ratio, double safety = 2.0);

  int dimension() const noexcept { return dimension_; }
  int n_max() const noexcept { return n_max_; }
  std::size_t size() const noexcept;
  ModeIndex mode(std::size_t index) const;
  std::size_t index(const ModeIndex& mode) const;
  bool adequate_for(double ratio, double safety) const noexcept;

 private:
  int dimension_;
  int n_max_;
};

// ---------------------------------------------------------------------------
// Transfer matrix
// ---------------------------------------------------------------------------

enum class TailClosure {
  /// Plain truncation at n_max.
  None,
  /// Border the truncated block with a low-rank factor carrying the
  /// contribution of every mode beyond n_max, so the spectrum is that of the
  /// untruncated operator.
  Exact,
};

struct QuadratureSpec {
  /// Gauss-Legendre nodes per pupil axis; 0 selects default_order().
  std::size_t order = 0;
  std::size_t min_order = 16;
  /// Largest entry change tolerated when the order is doubled.
  double tolerance = 1e-8;
  bool check_convergence = true;
  /// kappa in n_max >= ceil(kappa * L / x_R).
  double safety_factor = 2.0;
  TailClosure closure = TailClosure::Exact;

  /// max(32, 8 * ceil(ratio)).
  static std::size_t default_order(double ratio) noexcept;
};

/// How singular values map onto transmissivities.
enum class MatrixForm {
  /// Field amplitudes: eta = sigma^2.
  Amplitude,
  /// Already an intensity (Gram) operator: eta = sigma.
  Gram,
};

class TransferMatrix {
 public:
  explicit TransferMatrix(Eigen::MatrixXcd entries, MatrixForm form = MatrixForm::Amplitude);
  TransferMatrix(Eigen::MatrixXcd entries, MatrixForm form, ModeGrid grid,
                 OpticalSetup setup, std::size_t closure_rank,
                 std::size_t quadrature_order, double quadrature_delta);

  /// Full matrix, including the tail-closure border when present.
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  /// The block indexed by the mode grid.
  Eigen::MatrixXcd mode_block() const;
  std::complex<double> at(const ModeIndex& n_i, const ModeIndex& n_o) const;

  MatrixForm form() const noexcept { return form_; }
  const std::optional<ModeGrid>& grid() const noexcept { return grid_; }
  const std::optional<OpticalSetup>& setup() const noexcept { return setup_; }
  std::size_t closure_rank() const noexcept { return closure_rank_; }
  std::size_t quadrature_order() const noexcept { return quadrature_order_; }
  /// Max entry change observed in the order-doubling check (0 if skipped).
  double quadrature_delta() const noexcept { return quadrature_delta_; }

 private:
  Eigen::MatrixXcd entries_;
  MatrixForm form_;
  std::optional<ModeGrid> grid_;
  std::optional<OpticalSetup> setup_;
  std::size_t closure_rank_ = 0;
  std::size_t quadrature_order_ = 0;
  double quadrature_delta_ = 0;
};

/// Discretised diffraction transfer matrix between object-plane and
/// image-plane transverse-momentum modes,
///
///   T[n_i][n_o] = (L/x_R)^d * Int_pupil d^d r~ Prod_axes sinc(n_o + (L/x_R) r~) sinc(n_i + (L/x_R) r~)
///
/// where the window integrals over the object and image planes have been
/// done in closed form. The quadratic phases cancel against the mode
/// definitions, so entries are real. A slit pupil builds the one-axis
/// operator in Gram form; 2D pupils build the amplitude matrix.
TransferMatrix build_transfer_matrix(const OpticalSetup& setup, const Pupil& pupil,
                                     const ModeGrid& grid, const QuadratureSpec& quad = {});

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

inline constexpr double kPassivityTolerance = 1e-6;

/// Mode transmissivities, sorted descending, each in [0, 1].
class TransmissivitySpectrum {
 public:
  TransmissivitySpectrum() = default;

  /// Sorts and clamps; throws PassivityViolation for eta > 1 + 1e-6 and
  /// InvalidArgument for negative or non-finite values.
  static TransmissivitySpectrum from_values(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_.at(i); }

 private:
  std::vector<double> values_;
};

TransmissivitySpectrum singular_values(const TransferMatrix& matrix);

struct Decomposition {
  TransmissivitySpectrum spectrum;
  Eigen::VectorXd singular;
  Eigen::MatrixXcd output_modes;  // columns of V
  Eigen::MatrixXcd input_modes;   // columns of U
};

/// Full SVD T = V diag(sigma) U^H, for diagnostics.
Decomposition decompose(const TransferMatrix& matrix);

/// Number of transmissivities strictly above threshold in (0, 1).
std::size_t plateau_count(const TransmissivitySpectrum& spectrum, double threshold);

// ---------------------------------------------------------------------------
// Output-field overlap
// ---------------------------------------------------------------------------

struct Position {
  double x = 0;
  double y = 0;
};

struct OverlapOptions {
  std::size_t initial_order = 0;  // 0: chosen from the separation
  /// Change between successive orders, relative to max(|C|, peak).
  double tolerance = 1e-12;
  int max_doublings = 8;
};

/// Overlap C(k, k') between the image-plane fields of two object-plane
/// pixels, by quadrature over the pupil. For a slit the one-axis analog is
/// returned (x components only).
std::complex<double> overlap(const OpticalSetup& setup, const Pupil& pupil,
                             const Position& r_k, const Position& r_kp,
                             const OverlapOptions& options = {});

/// Closed form of overlap(): Bessel J1 for circles, sinc products for
/// slits and rectangles.
std::complex<double> overlap_closed_form(const OpticalSetup& setup, const Pupil& pupil,
                                         const Position& r_k, const Position& r_kp);

}  // namespace diffcap
