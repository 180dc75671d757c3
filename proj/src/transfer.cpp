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

#include "diffcap/transfer.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "diffcap/quadrature.hpp"
#include "parallel.hpp"

namespace diffcap {

namespace {

constexpr double kPi = std::numbers::pi;

void require_extent(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "pupil: " << what << " must be finite and >= 0 (got " << value << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

}  // namespace

// --- Pupil -----------------------------------------------------------------

std::string_view to_string(PupilShape shape) noexcept {
  switch (shape) {
    case PupilShape::Circular: return "circular";
    case PupilShape::Slit: return "slit";
    case PupilShape::Rectangular: return "rectangular";
  }
  return "unknown";
}

Pupil Pupil::circular(double radius) {
  require_extent(radius, "radius");
  return Pupil(PupilShape::Circular, radius, radius);
}

Pupil Pupil::slit(double half_width) {
  require_extent(half_width, "half-width");
  return Pupil(PupilShape::Slit, half_width, std::numeric_limits<double>::infinity());
}

Pupil Pupil::rectangular(double half_width_x, double half_width_y) {
  require_extent(half_width_x, "x half-width");
  require_extent(half_width_y, "y half-width");
  return Pupil(PupilShape::Rectangular, half_width_x, half_width_y);
}

bool Pupil::contains(double x, double y) const noexcept {
  switch (shape_) {
    case PupilShape::Circular: return x * x + y * y < extent_x_ * extent_x_;
    case PupilShape::Slit: return std::abs(x) < extent_x_;
    case PupilShape::Rectangular: return std::abs(x) < extent_x_ && std::abs(y) < extent_y_;
  }
  return false;
}

PupilRule pupil_rule(const Pupil& pupil, double scale, std::size_t order) {
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "pupil rule: scale must be > 0");
  PupilRule rule;
  if (pupil.is_closed()) return rule;

  const GaussLegendreRule gl = gauss_legendre(order);
  const std::size_t p = gl.nodes.size();

  switch (pupil.shape()) {
    case PupilShape::Slit: {
      const double h = pupil.extent_x() / scale;
      rule.x.resize(p);
      rule.y.assign(p, 0.0);
      rule.weight.resize(p);
      for (std::size_t i = 0; i < p; ++i) {
        rule.x[i] = h * gl.nodes[i];
        rule.weight[i] = h * gl.weights[i];
      }
      break;
    }
    case PupilShape::Rectangular: {
      const double hx = pupil.extent_x() / scale;
      const double hy = pupil.extent_y() / scale;
      rule.x.reserve(p * p);
      rule.y.reserve(p * p);
      rule.weight.reserve(p * p);
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
          rule.x.push_back(hx * gl.nodes[i]);
          rule.y.push_back(hy * gl.nodes[j]);
          rule.weight.push_back(hx * hy * gl.weights[i] * gl.weights[j]);
        }
      }
      break;
    }
    case PupilShape::Circular: {
      const double rho = pupil.extent_x() / scale;
      rule.x.reserve(p * p);
      rule.y.reserve(p * p);
      rule.weight.reserve(p * p);
      for (std::size_t i = 0; i < p; ++i) {
        const double theta = 0.5 * kPi * gl.nodes[i];
        const double w_theta = 0.5 * kPi * gl.weights[i];
        const double c = std::cos(theta);
        const double chord = rho * c;  // half-length of the chord at x
        const double x = rho * std::sin(theta);
        for (std::size_t j = 0; j < p; ++j) {
          rule.x.push_back(x);
          rule.y.push_back(chord * gl.nodes[j]);
          // dx = rho cos(theta) dtheta, dy = chord ds
          rule.weight.push_back(w_theta * rho * c * chord * gl.weights[j]);
        }
      }
      break;
    }
  }
  return rule;
}

// --- ModeGrid --------------------------------------------------------------

ModeGrid::ModeGrid(int dimension, int n_max) : dimension_(dimension), n_max_(n_max) {
  if (dimension != 1 && dimension != 2) {
    throw Error(ErrorKind::InvalidArgument, "mode grid: dimension must be 1 or 2");
  }
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "mode grid: n_max must be >= 0");
  if (dimension == 2 && n_max > kMaxCutoff2d) {
    std::ostringstream os;
    os << "mode grid: 2D cutoff " << n_max << " exceeds the dense-storage cap of "
       << kMaxCutoff2d << "; use the near-field closed forms at this ratio";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

ModeGrid ModeGrid::for_ratio(int dimension, double ratio, double safety) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw Error(ErrorKind::InvalidArgument, "mode grid: ratio must be positive");
  }
  if (!(safety >= 2.0)) {
    throw Error(ErrorKind::InvalidArgument, "mode grid: safety factor must be >= 2");
  }
  const double need = std::ceil(safety * ratio - 1e-9);
  return ModeGrid(dimension, std::max(1, static_cast<int>(need)));
}

std::size_t ModeGrid::size() const noexcept {
  const auto side = static_cast<std::size_t>(2 * n_max_ + 1);
  return dimension_ == 1 ? side : side * side;
}

ModeIndex ModeGrid::mode(std::size_t index) const {
  if (index >= size()) throw Error(ErrorKind::InvalidArgument, "mode grid: index out of range");
  const auto side = static_cast<std::size_t>(2 * n_max_ + 1);
  if (dimension_ == 1) return {static_cast<int>(index) - n_max_, 0};
  return {static_cast<int>(index / side) - n_max_, static_cast<int>(index % side) - n_max_};
}

std::size_t ModeGrid::index(const ModeIndex& m) const {
  const auto in_range = [this](int v) { return v >= -n_max_ && v <= n_max_; };
  if (!in_range(m[0]) || (dimension_ == 2 && !in_range(m[1])) ||
      (dimension_ == 1 && m[1] != 0)) {
    throw Error(ErrorKind::InvalidArgument, "mode grid: mode index outside the grid");
  }
  const auto side = static_cast<std::size_t>(2 * n_max_ + 1);
  const auto ix = static_cast<std::size_t>(m[0] + n_max_);
  if (dimension_ == 1) return ix;
  return ix * side + static_cast<std::size_t>(m[1] + n_max_);
}

bool ModeGrid::adequate_for(double ratio, double safety) const noexcept {
  return static_cast<double>(n_max_) >= std::ceil(safety * ratio - 1e-9);
}

// --- TransferMatrix --------------------------------------------------------

std::size_t QuadratureSpec::default_order(double ratio) noexcept {
  const double scaled = 8.0 * std::ceil(std::max(ratio, 0.0));
  return std::max<std::size_t>(32, static_cast<std::size_t>(scaled));
}

TransferMatrix::TransferMatrix(Eigen::MatrixXcd entries, MatrixForm form)
    : entries_(std::move(entries)), form_(form) {
  if (entries_.rows() != entries_.cols()) {
    throw Error(ErrorKind::InvalidArgument, "transfer matrix must be square");
  }
}

TransferMatrix::TransferMatrix(Eigen::MatrixXcd entries, MatrixForm form, ModeGrid grid,
                               OpticalSetup setup, std::size_t closure_rank,
                               std::size_t quadrature_order, double quadrature_delta)
    : entries_(std::move(entries)),
      form_(form),
      grid_(grid),
      setup_(setup),
      closure_rank_(closure_rank),
      quadrature_order_(quadrature_order),
      quadrature_delta_(quadrature_delta) {}

Eigen::MatrixXcd TransferMatrix::mode_block() const {
  if (!grid_) return entries_;
  const auto n = static_cast<Eigen::Index>(grid_->size());
  return entries_.topLeftCorner(n, n);
}

std::complex<double> TransferMatrix::at(const ModeIndex& n_i, const ModeIndex& n_o) const {
  if (!grid_) throw Error(ErrorKind::InvalidArgument, "transfer matrix has no mode grid");
  return entries_(static_cast<Eigen::Index>(grid_->index(n_i)),
                  static_cast<Eigen::Index>(grid_->index(n_o)));
}

namespace {

// Pupil-node factor B with T_modes = B^T B:
//   1D: B(q, n)      = sqrt(a w_q) sinc(n + a x_q)
//   2D: B(q, nx, ny) = a sqrt(w_q) sinc(nx + a x_q) sinc(ny + a y_q)
Eigen::MatrixXd mode_factor(const PupilRule& rule, const ModeGrid& grid, double a) {
  const auto q_count = static_cast<Eigen::Index>(rule.size());
  const auto m_count = static_cast<Eigen::Index>(grid.size());
  const int n_max = grid.n_max();
  const int side = 2 * n_max + 1;
  Eigen::MatrixXd factor(q_count, m_count);

  detail::parallel_for(rule.size(), [&](std::size_t q) {
    const auto row = static_cast<Eigen::Index>(q);
    if (grid.dimension() == 1) {
      const double scale = std::sqrt(a * rule.weight[q]);
      for (int n = -n_max; n <= n_max; ++n) {
        factor(row, n + n_max) = scale * sinc(n + a * rule.x[q]);
      }
      return;
    }
    const double scale = a * std::sqrt(rule.weight[q]);
    std::vector<double> sx(static_cast<std::size_t>(side));
    std::vector<double> sy(static_cast<std::size_t>(side));
    for (int n = -n_max; n <= n_max; ++n) {
      sx[static_cast<std::size_t>(n + n_max)] = sinc(n + a * rule.x[q]);
      sy[static_cast<std::size_t>(n + n_max)] = sinc(n + a * rule.y[q]);
    }
    for (int ix = 0; ix < side; ++ix) {
      for (int iy = 0; iy < side; ++iy) {
        factor(row, ix * side + iy) =
            scale * sx[static_cast<std::size_t>(ix)] * sy[static_cast<std::size_t>(iy)];
      }
    }
  });
  return factor;
}

// Untruncated node kernel: sum over all integer modes of B(q, n) B(q', n),
// collapsed with sum_n sinc(n + s) sinc(n + t) = sinc(s - t).
double node_kernel(const PupilRule& rule, int dimension, double a, std::size_t q,
                   std::size_t qp) {
  const double w = std::sqrt(rule.weight[q] * rule.weight[qp]);
  const double kx = sinc(a * (rule.x[q] - rule.x[qp]));
  if (dimension == 1) return a * w * kx;
  return a * a * w * kx * sinc(a * (rule.y[q] - rule.y[qp]));
}

// Low-rank factor C with C C^T ~= K - B B^T (the modes beyond n_max), by
// pivoted Cholesky with lazily evaluated columns.
Eigen::MatrixXd tail_factor(const PupilRule& rule, int dimension, double a,
                            const Eigen::MatrixXd& factor) {
  const auto q_count = static_cast<Eigen::Index>(rule.size());
  Eigen::VectorXd diag(q_count);
  double kernel_max = 0.0;
  for (Eigen::Index q = 0; q < q_count; ++q) {
    const auto qq = static_cast<std::size_t>(q);
    const double k = node_kernel(rule, dimension, a, qq, qq);
    kernel_max = std::max(kernel_max, k);
    diag(q) = std::max(0.0, k - factor.row(q).squaredNorm());
  }
  const double stop = 1e-14 * kernel_max;

  std::vector<Eigen::VectorXd> columns;
  Eigen::VectorXd column(q_count);
  while (static_cast<Eigen::Index>(columns.size()) < q_count) {
    Eigen::Index pivot = 0;
    const double largest = diag.maxCoeff(&pivot);
    if (!(largest > stop)) break;

    const auto pq = static_cast<std::size_t>(pivot);
    const Eigen::VectorXd projected = factor * factor.row(pivot).transpose();
    for (Eigen::Index q = 0; q < q_count; ++q) {
      column(q) = node_kernel(rule, dimension, a, static_cast<std::size_t>(q), pq) -
                  projected(q);
    }
    for (const auto& c : columns) column -= c * c(pivot);
    column /= std::sqrt(largest);
    for (Eigen::Index q = 0; q < q_count; ++q) {
      diag(q) = std::max(0.0, diag(q) - column(q) * column(q));
    }
    diag(pivot) = 0.0;
    columns.push_back(column);
  }

  Eigen::MatrixXd tail(q_count, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    tail.col(static_cast<Eigen::Index>(j)) = columns[j];
  }
  return tail;
}

double pupil_reach(const Pupil& pupil, double scale) {
  if (pupil.shape() == PupilShape::Slit) return pupil.extent_x() / scale;
  return std::max(pupil.extent_x(), pupil.extent_y()) / scale;
}

}  // namespace

TransferMatrix build_transfer_matrix(const OpticalSetup& setup, const Pupil& pupil,
                                     const ModeGrid& grid, const QuadratureSpec& quad) {
  if (grid.dimension() != pupil.dimension()) {
    throw Error(ErrorKind::InvalidArgument,
                "transfer matrix: grid dimension does not match the pupil");
  }
  const double a = ratio(setup);
  if (!(quad.safety_factor >= 2.0)) {
    throw Error(ErrorKind::InvalidArgument, "transfer matrix: safety factor must be >= 2");
  }
  if (!grid.adequate_for(a, quad.safety_factor)) {
    std::ostringstream os;
    os << "transfer matrix: n_max = " << grid.n_max() << " is below ceil("
       << quad.safety_factor << " * L/x_R) for L/x_R = " << a;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }

  const double scale = setup.pupil_radius();
  const double reach = pupil_reach(pupil, scale);
  const std::size_t order =
      quad.order != 0 ? quad.order : QuadratureSpec::default_order(a * std::max(reach, 1.0));
  if (order < quad.min_order) {
    std::ostringstream os;
    os << "transfer matrix: quadrature order " << order << " below minimum "
       << quad.min_order;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }

  const auto m_count = static_cast<Eigen::Index>(grid.size());
  const MatrixForm form = grid.dimension() == 1 ? MatrixForm::Gram : MatrixForm::Amplitude;

  const PupilRule rule = pupil_rule(pupil, scale, order);
  if (rule.size() == 0) {
    return TransferMatrix(Eigen::MatrixXcd::Zero(m_count, m_count), form, grid, setup, 0,
                          order, 0.0);
  }

  const Eigen::MatrixXd factor = mode_factor(rule, grid, a);
  const Eigen::MatrixXd modes = factor.transpose() * factor;

  double delta = 0.0;
  if (quad.check_convergence) {
    const PupilRule fine = pupil_rule(pupil, scale, 2 * order);
    const Eigen::MatrixXd fine_factor = mode_factor(fine, grid, a);
    const Eigen::MatrixXd fine_modes = fine_factor.transpose() * fine_factor;
    delta = (fine_modes - modes).cwiseAbs().maxCoeff();
    if (!(delta <= quad.tolerance)) {
      std::ostringstream os;
      os << "transfer matrix: doubling the quadrature order from " << order
         << " changed an entry by " << delta << " (tolerance " << quad.tolerance << ")";
      throw Error(ErrorKind::QuadratureNonconvergence, os.str());
    }
  }

  Eigen::MatrixXd full;
  std::size_t rank = 0;
  if (quad.closure == TailClosure::Exact) {
    const Eigen::MatrixXd tail = tail_factor(rule, grid.dimension(), a, factor);
    rank = static_cast<std::size_t>(tail.cols());
    Eigen::MatrixXd bordered(factor.rows(), factor.cols() + tail.cols());
    bordered << factor, tail;
    full = bordered.transpose() * bordered;
    full.topLeftCorner(m_count, m_count) = modes;
  } else {
    full = modes;
  }

  if (!full.allFinite()) {
    throw Error(ErrorKind::DecompositionFailure, "transfer matrix: non-finite entries");
  }

  TransferMatrix result(full.cast<std::complex<double>>(), form, grid, setup, rank, order,
                        delta);
  // Throws PassivityViolation when the largest transmissivity exceeds 1 + 1e-6.
  (void)singular_values(result);
  return result;
}

// --- spectrum --------------------------------------------------------------

TransmissivitySpectrum TransmissivitySpectrum::from_values(std::vector<double> values) {
  for (double& v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "transmissivity spectrum: values must be finite and >= 0");
    }
    if (v > 1.0 + kPassivityTolerance) {
      std::ostringstream os;
      os << "transmissivity " << v << " exceeds 1 + " << kPassivityTolerance;
      throw Error(ErrorKind::PassivityViolation, os.str());
    }
    v = std::min(v, 1.0);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  TransmissivitySpectrum s;
  s.values_ = std::move(values);
  return s;
}

namespace {

std::vector<double> to_transmissivities(const Eigen::VectorXd& singular, MatrixForm form) {
  std::vector<double> eta(static_cast<std::size_t>(singular.size()));
  for (Eigen::Index i = 0; i < singular.size(); ++i) {
    const double s = std::abs(singular(i));
    eta[static_cast<std::size_t>(i)] = form == MatrixForm::Gram ? s : s * s;
  }
  return eta;
}

bool is_hermitian(const Eigen::MatrixXcd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

TransmissivitySpectrum singular_values(const TransferMatrix& matrix) {
  const Eigen::MatrixXcd& t = matrix.entries();
  if (t.size() == 0) return {};
  if (!t.allFinite()) {
    throw Error(ErrorKind::DecompositionFailure, "singular values: non-finite entries");
  }

  Eigen::VectorXd singular;
  if (is_hermitian(t)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(t, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::DecompositionFailure, "Hermitian eigensolver did not converge");
    }
    singular = solver.eigenvalues().cwiseAbs();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(t);
    if (svd.info() != Eigen::Success) {
      throw Error(ErrorKind::DecompositionFailure, "SVD did not converge");
    }
    singular = svd.singularValues();
  }
  return TransmissivitySpectrum::from_values(to_transmissivities(singular, matrix.form()));
}

Decomposition decompose(const TransferMatrix& matrix) {
  const Eigen::MatrixXcd& t = matrix.entries();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorKind::DecompositionFailure, "SVD did not converge");
  }
  Decomposition d;
  d.singular = svd.singularValues();
  d.output_modes = svd.matrixU();
  d.input_modes = svd.matrixV();
  d.spectrum =
      TransmissivitySpectrum::from_values(to_transmissivities(d.singular, matrix.form()));
  return d;
}

std::size_t plateau_count(const TransmissivitySpectrum& spectrum, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "plateau threshold must lie in (0, 1)");
  }
  return static_cast<std::size_t>(
      std::count_if(spectrum.values().begin(), spectrum.values().end(),
                    [threshold](double v) { return v > threshold; }));
}

// --- overlap ---------------------------------------------------------------

namespace {

std::complex<double> pixel_phase(const OpticalSetup& setup, const Position& r_k,
                                 const Position& r_kp, bool one_axis) {
  const double yk = one_axis ? 0.0 : r_k.y;
  const double ykp = one_axis ? 0.0 : r_kp.y;
  const double d_theta = kPi / (setup.wavelength() * setup.object_distance()) *
                         ((r_k.x * r_k.x + yk * yk) - (r_kp.x * r_kp.x + ykp * ykp));
  return std::polar(1.0, d_theta);
}

}  // namespace

std::complex<double> overlap_closed_form(const OpticalSetup& setup, const Pupil& pupil,
                                         const Position& r_k, const Position& r_kp) {
  const double xr = rayleigh_length(setup);
  const double scale = setup.pupil_radius();
  const bool one_axis = pupil.dimension() == 1;
  const double kx = (r_k.x - r_kp.x) / xr;
  const double ky = one_axis ? 0.0 : (r_k.y - r_kp.y) / xr;

  double integral = 0.0;
  switch (pupil.shape()) {
    case PupilShape::Slit: {
      const double h = pupil.extent_x() / scale;
      integral = 2.0 * h * sinc(2.0 * kx * h);
      return pixel_phase(setup, r_k, r_kp, true) * (integral / xr);
    }
    case PupilShape::Rectangular: {
      const double hx = pupil.extent_x() / scale;
      const double hy = pupil.extent_y() / scale;
      integral = 4.0 * hx * hy * sinc(2.0 * kx * hx) * sinc(2.0 * ky * hy);
      break;
    }
    case PupilShape::Circular: {
      const double rho = pupil.extent_x() / scale;
      const double k = std::hypot(kx, ky);
      const double arg = 2.0 * kPi * k * rho;
      integral = arg < 1e-8 ? kPi * rho * rho : rho * std::cyl_bessel_j(1.0, arg) / k;
      break;
    }
  }
  return pixel_phase(setup, r_k, r_kp, one_axis) * (integral / (xr * xr));
}

std::complex<double> overlap(const OpticalSetup& setup, const Pupil& pupil,
                             const Position& r_k, const Position& r_kp,
                             const OverlapOptions& options) {
  const double xr = rayleigh_length(setup);
  const double scale = setup.pupil_radius();
  const bool one_axis = pupil.dimension() == 1;
  const double kx = (r_k.x - r_kp.x) / xr;
  const double ky = one_axis ? 0.0 : (r_k.y - r_kp.y) / xr;

  const auto integrate = [&](std::size_t order) {
    const PupilRule rule = pupil_rule(pupil, scale, order);
    std::complex<double> sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      sum += rule.weight[q] * std::polar(1.0, -2.0 * kPi * (kx * rule.x[q] + ky * rule.y[q]));
    }
    return sum;
  };

  const double reach = pupil_reach(pupil, scale);
  std::size_t order = options.initial_order;
  if (order == 0) {
    const double cycles = std::hypot(kx, ky) * 2.0 * reach;
    order = std::max<std::size_t>(32, 16 + static_cast<std::size_t>(8.0 * std::ceil(cycles)));
  }

  double area = 0.0;
  for (double w : pupil_rule(pupil, scale, order).weight) area += w;
  std::complex<double> coarse = integrate(order);
  for (int attempt = 0; attempt < options.max_doublings; ++attempt) {
    order *= 2;
    const std::complex<double> fine = integrate(order);
    const double change = std::abs(fine - coarse);
    coarse = fine;
    // Relative to the value, or to the peak (the pupil area) near a zero.
    if (change <= options.tolerance * std::max(std::abs(fine), area) || change < 1e-300) {
      const double norm = one_axis ? 1.0 / xr : 1.0 / (xr * xr);
      return pixel_phase(setup, r_k, r_kp, one_axis) * (fine * norm);
    }
  }
  throw Error(ErrorKind::QuadratureNonconvergence,
              "overlap: pupil quadrature did not converge");
}

}  // namespace diffcap
