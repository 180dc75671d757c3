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

#include "diffcap/core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace diffcap {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSetup: return "invalid-setup";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::QuadratureNonconvergence: return "quadrature-nonconvergence";
    case ErrorKind::DecompositionFailure: return "decomposition-failure";
    case ErrorKind::PassivityViolation: return "passivity-violation";
    case ErrorKind::Nonconvergence: return "nonconvergence";
  }
  return "unknown";
}

namespace {

constexpr double kLn2 = std::numbers::ln2;

// y * (log1p(t) - t) with t = delta / y, for y > 0.
double log1p_remainder(double y, double delta) {
  const double t = delta / y;
  if (t < 1e-4) {
    // -t^2/2 + t^3/3 - t^4/4 + t^5/5
    const double series = t * t * (-0.5 + t * (1.0 / 3.0 + t * (-0.25 + t * 0.2)));
    return y * series;
  }
  return y * std::log1p(t) - delta;
}

}  // namespace

double g(double x) noexcept {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return x;
  if (x < 1e-300) {
    // -x log2 x + x log2 e; avoids 0 * inf in the full form
    return (-x * std::log(x) + x) / kLn2;
  }
  if (x <= 1.0) return ((1.0 + x) * std::log1p(x) - x * std::log(x)) / kLn2;
  return (std::log1p(x) + x * std::log1p(1.0 / x)) / kLn2;
}

double g_increment(double base, double delta) noexcept {
  if (!(delta > 0.0)) return 0.0;
  if (!(base > 0.0)) return g(delta);
  const double lead = delta * std::log1p(1.0 / (base + delta));
  const double value =
      lead + log1p_remainder(base + 1.0, delta) - log1p_remainder(base, delta);
  return value / kLn2;
}

// --- OpticalSetup ----------------------------------------------------------

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "optical setup: " << name << " must be positive and finite (got " << value << ")";
    throw Error(ErrorKind::InvalidSetup, os.str());
  }
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

constexpr double kSetupTolerance = 1e-12;

}  // namespace

OpticalSetup OpticalSetup::from_all(double wavelength, double object_distance,
                                    double image_distance, double focal_length,
                                    double pupil_radius, double object_size,
                                    double magnification) {
  require_positive(wavelength, "wavelength");
  require_positive(object_distance, "object distance");
  require_positive(image_distance, "image distance");
  require_positive(focal_length, "focal length");
  require_positive(pupil_radius, "pupil radius");
  require_positive(object_size, "object size");
  require_positive(magnification, "magnification");

  const double inv_sum = 1.0 / object_distance + 1.0 / image_distance;
  if (!close_rel(inv_sum, 1.0 / focal_length, kSetupTolerance)) {
    throw Error(ErrorKind::InvalidSetup,
                "optical setup: 1/D_o + 1/D_i != 1/f (thin-lens condition violated)");
  }
  if (!close_rel(magnification, image_distance / object_distance, kSetupTolerance)) {
    throw Error(ErrorKind::InvalidSetup, "optical setup: M != D_i / D_o");
  }

  OpticalSetup s;
  s.wavelength_ = wavelength;
  s.object_distance_ = object_distance;
  s.image_distance_ = image_distance;
  s.focal_length_ = focal_length;
  s.pupil_radius_ = pupil_radius;
  s.object_size_ = object_size;
  s.magnification_ = magnification;
  return s;
}

OpticalSetup OpticalSetup::from_image_distance(double wavelength, double object_distance,
                                               double image_distance, double pupil_radius,
                                               double object_size) {
  require_positive(object_distance, "object distance");
  require_positive(image_distance, "image distance");
  const double f = object_distance * image_distance / (object_distance + image_distance);
  return from_all(wavelength, object_distance, image_distance, f, pupil_radius,
                  object_size, image_distance / object_distance);
}

OpticalSetup OpticalSetup::from_magnification(double wavelength, double object_distance,
                                              double magnification, double pupil_radius,
                                              double object_size) {
  require_positive(object_distance, "object distance");
  require_positive(magnification, "magnification");
  const double di = magnification * object_distance;
  const double f = object_distance * magnification / (1.0 + magnification);
  return from_all(wavelength, object_distance, di, f, pupil_radius, object_size,
                  magnification);
}

OpticalSetup OpticalSetup::from_focal_length(double wavelength, double object_distance,
                                             double focal_length, double pupil_radius,
                                             double object_size) {
  require_positive(object_distance, "object distance");
  require_positive(focal_length, "focal length");
  if (!(object_distance > focal_length)) {
    throw Error(ErrorKind::InvalidSetup,
                "optical setup: object must lie beyond the focal length for a real image");
  }
  const double di = object_distance * focal_length / (object_distance - focal_length);
  return from_all(wavelength, object_distance, di, focal_length, pupil_radius,
                  object_size, di / object_distance);
}

OpticalSetup OpticalSetup::with_object_size(double object_size) const {
  require_positive(object_size, "object size");
  OpticalSetup s = *this;
  s.object_size_ = object_size;
  return s;
}

OpticalSetup OpticalSetup::with_ratio(double r) const {
  require_positive(r, "ratio L/x_R");
  return with_object_size(r * rayleigh_length(*this));
}

double rayleigh_length(const OpticalSetup& setup) noexcept {
  return setup.wavelength() * setup.object_distance() / setup.pupil_radius();
}

double ratio(const OpticalSetup& setup) noexcept {
  return setup.object_size() / rayleigh_length(setup);
}

double fresnel_number(const OpticalSetup& setup) noexcept {
  const double m = setup.magnification();
  const double l = setup.object_size();
  const double d = setup.object_distance() + setup.image_distance();
  const double ld = setup.wavelength() * d;
  return m * m * (l * l) * (l * l) / (ld * ld);
}

// --- regimes ---------------------------------------------------------------

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::FarField: return "far-field";
    case Regime::Intermediate: return "intermediate";
    case Regime::NearField: return "near-field";
  }
  return "unknown";
}

void RegimeThresholds::validate() const {
  if (!(far > 0.0) || !(near > far) || !std::isfinite(near)) {
    throw Error(ErrorKind::InvalidArgument,
                "regime thresholds must satisfy 0 < far < near");
  }
}

RegimeReport classify_ratio(double r, const RegimeThresholds& thresholds) {
  thresholds.validate();
  RegimeReport report;
  report.ratio = r;
  report.thresholds = thresholds;
  if (r <= thresholds.far) {
    report.regime = Regime::FarField;
  } else if (r >= thresholds.near) {
    report.regime = Regime::NearField;
  } else {
    report.regime = Regime::Intermediate;
  }
  return report;
}

RegimeReport classify_regime(const OpticalSetup& setup, const RegimeThresholds& thresholds) {
  return classify_ratio(ratio(setup), thresholds);
}

// --- PhotonBudget ----------------------------------------------------------

namespace {

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "photon budget: " << name << " must be finite and >= 0 (got " << value << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

}  // namespace

PhotonBudget PhotonBudget::photons(double mean_photons, double thermal_photons) {
  require_nonnegative(mean_photons, "mean photon number");
  require_nonnegative(thermal_photons, "thermal photon number");
  PhotonBudget b;
  b.mean_photons_ = mean_photons;
  b.thermal_photons_ = thermal_photons;
  return b;
}

PhotonBudget PhotonBudget::power(double mean_power, double time_window,
                                 double thermal_photons) {
  require_nonnegative(mean_power, "mean power");
  require_nonnegative(thermal_photons, "thermal photon number");
  if (!(time_window > 0.0) || !std::isfinite(time_window)) {
    throw Error(ErrorKind::InvalidArgument, "photon budget: time window must be > 0");
  }
  PhotonBudget b;
  b.power_ = mean_power;
  b.time_window_ = time_window;
  b.thermal_photons_ = thermal_photons;
  return b;
}

}  // namespace diffcap
