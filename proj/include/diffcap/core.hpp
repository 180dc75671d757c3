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

#include <optional>
#include <string_view>

#include "diffcap/error.hpp"

namespace diffcap {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double speed_of_light = 299792458.0;  // m / s
}  // namespace constants

/// Entropy of a thermal bosonic mode with mean occupation x, in bits.
/// Zero for x <= 0.
double g(double x) noexcept;

/// g(base + delta) - g(base) without cancellation for delta << base.
/// Requires base >= 0 and delta >= 0.
double g_increment(double base, double delta) noexcept;

/// Thin-lens imaging geometry. All lengths in meters.
///
/// Instances are always valid: every field positive, 1/D_o + 1/D_i = 1/f and
/// M = D_i/D_o to 1e-12 relative.
class OpticalSetup {
 public:
  static OpticalSetup from_focal_length(double wavelength, double object_distance,
                                        double focal_length, double pupil_radius,
                                        double object_size);
  static OpticalSetup from_image_distance(double wavelength, double object_distance,
                                          double image_distance, double pupil_radius,
                                          double object_size);
  static OpticalSetup from_magnification(double wavelength, double object_distance,
                                         double magnification, double pupil_radius,
                                         double object_size);

  /// Fully specified constructor; over-determined input is checked against
  /// the thin-lens and magnification relations.
  static OpticalSetup from_all(double wavelength, double object_distance,
                               double image_distance, double focal_length,
                               double pupil_radius, double object_size,
                               double magnification);

  double wavelength() const noexcept { return wavelength_; }
  double object_distance() const noexcept { return object_distance_; }
  double image_distance() const noexcept { return image_distance_; }
  double focal_length() const noexcept { return focal_length_; }
  double pupil_radius() const noexcept { return pupil_radius_; }
  double object_size() const noexcept { return object_size_; }
  double magnification() const noexcept { return magnification_; }

  /// Same geometry with the object size chosen so that L / x_R == ratio.
  OpticalSetup with_ratio(double ratio) const;
  OpticalSetup with_object_size(double object_size) const;

 private:
  OpticalSetup() = default;

  double wavelength_ = 0;
  double object_distance_ = 0;
  double image_distance_ = 0;
  double focal_length_ = 0;
  double pupil_radius_ = 0;
  double object_size_ = 0;
  double magnification_ = 0;
};

/// x_R = lambda * D_o / R.
double rayleigh_length(const OpticalSetup& setup) noexcept;

/// L / x_R, the parameter every closed form depends on.
double ratio(const OpticalSetup& setup) noexcept;

/// M^2 L^4 / (lambda D)^2 with D = D_o + D_i.
double fresnel_number(const OpticalSetup& setup) noexcept;

enum class Regime { FarField, Intermediate, NearField };

std::string_view to_string(Regime regime) noexcept;

struct RegimeThresholds {
  double far = 0.2;
  double near = 5.0;

  /// Throws InvalidArgument unless 0 < far < near.
  void validate() const;
};

struct RegimeReport {
  double ratio = 0;
  Regime regime = Regime::Intermediate;
  RegimeThresholds thresholds;
};

/// Tags a dimensionless ratio (L/x_R or its free-space analog) against the
/// thresholds.
RegimeReport classify_ratio(double ratio, const RegimeThresholds& thresholds = {});

RegimeReport classify_regime(const OpticalSetup& setup,
                             const RegimeThresholds& thresholds = {});

/// Input resource per channel use: either a mean photon number, or a mean
/// power over a time window. Thermal background occupation defaults to 0.
class PhotonBudget {
 public:
  static PhotonBudget photons(double mean_photons, double thermal_photons = 0.0);
  static PhotonBudget power(double mean_power, double time_window,
                            double thermal_photons = 0.0);

  bool is_photon_mode() const noexcept { return !power_.has_value(); }
  bool is_power_mode() const noexcept { return power_.has_value(); }

  /// Mean photon number; only meaningful in photon mode.
  double mean_photons() const noexcept { return mean_photons_; }
  double mean_power() const noexcept { return power_.value_or(0.0); }
  double time_window() const noexcept { return time_window_; }
  double thermal_photons() const noexcept { return thermal_photons_; }

  /// Energy per use, E = P * T (power mode only).
  double energy() const noexcept { return mean_power() * time_window_; }

  /// The budget in the unit the constraint is expressed in: photons in
  /// photon mode, joules in power mode.
  double total() const noexcept { return is_photon_mode() ? mean_photons_ : energy(); }

 private:
  PhotonBudget() = default;

  double mean_photons_ = 0;
  std::optional<double> power_;
  double time_window_ = 0;
  double thermal_photons_ = 0;
};

}  // namespace diffcap
