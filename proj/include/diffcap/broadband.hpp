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

#include <string_view>
#include <vector>

#include "diffcap/core.hpp"

namespace diffcap {

/// Frequency-independent parts of the per-frequency transmissivities, with
/// X = L R / (2 pi c D_o):
///   far field   eta(omega) = alpha omega^4,  alpha = pi^2 X^4  [s^4]
///   near field  nu(omega)  = beta omega^2,   beta  = pi X^2    [s^2]
/// so alpha = beta^2.
struct SpectralCoefficients {
  double alpha = 0;
  double beta = 0;

  static SpectralCoefficients from_setup(const OpticalSetup& setup);
};

/// Band [lower, lower + width] observed over a time window T. Components
/// sit on omega_j = 2 pi j / T. `width` may be +infinity.
class FrequencyBand {
 public:
  FrequencyBand(double lower, double width, double time_window);

  double lower() const noexcept { return lower_; }
  double width() const noexcept { return width_; }
  double upper() const noexcept { return lower_ + width_; }
  double time_window() const noexcept { return time_window_; }
  bool is_finite() const noexcept;

  /// Grid frequencies inside the band, ascending. Throws for infinite
  /// bands and for grids above `max_points`.
  std::vector<double> grid(std::size_t max_points = 50'000'000) const;

 private:
  double lower_;
  double width_;
  double time_window_;
};

enum class SpectralMode { Discrete, Continuum };

std::string_view to_string(SpectralMode mode) noexcept;

struct SpectralAllocation {
  /// Discrete mode only: grid frequencies and photons per frequency.
  std::vector<double> frequencies;
  std::vector<double> photons;
  /// Lagrange multiplier mu, in 1/W: n_j depends on 2^(mu hbar omega_j / T)
  /// (near field) or 2^(mu hbar / (alpha omega_j^3 T)) (far field).
  double multiplier = 0;
  /// ln(2) mu hbar / T (near field).
  double q = 0;
  /// Relative power residual.
  double residual = 0;
};

struct SpectralResult {
  double capacity = 0;  // bits per window T
  SpectralAllocation allocation;
  SpectralMode mode = SpectralMode::Discrete;
  RegimeReport lower_edge;
  RegimeReport upper_edge;
  /// Some frequency in the band is outside the formula's regime.
  bool regime_violation = false;
};

/// L / x_R at angular frequency omega, x_R = 2 pi c D_o / (omega R).
double ratio_at_frequency(const OpticalSetup& setup, double omega) noexcept;

/// Far field: sum_j g(alpha omega_j^4 n_j) under (1/T) sum_j hbar omega_j n_j
/// = P, or its integral form. Needs a finite band.
SpectralResult capacity_ff_spectral(const OpticalSetup& setup, const FrequencyBand& band,
                                    double power, SpectralMode mode,
                                    const RegimeThresholds& thresholds = {});

/// Near field: sum_j beta omega_j^2 g(n_j / (beta omega_j^2)) under the same
/// power constraint, or its integral form in the rescaled multiplier q.
SpectralResult capacity_nf_spectral(const OpticalSetup& setup, const FrequencyBand& band,
                                    double power, SpectralMode mode,
                                    const RegimeThresholds& thresholds = {});

/// Int_z^inf x^3 / (e^x - 1) dx.
double F_integral(double z);
/// Int_z^inf x^2 g(1 / (e^x - 1)) dx.
double G_integral(double z);

/// Int_a^b x^3 / (e^x - 1) dx with b possibly infinite.
double planck_power_integral(double a, double b);
/// Int_a^b x^2 g(1 / (e^x - 1)) dx with b possibly infinite.
double planck_capacity_integral(double a, double b);

/// Unique q > 0 with P = (beta hbar / (2 pi q^4)) Int_{q Omega}^{q (Omega + dOmega)}
/// x^3 / (e^x - 1) dx. `width` may be +infinity.
double solve_q(const OpticalSetup& setup, double lower, double width, double power,
               double time_window);

/// Narrowband closed forms (width << lower).
double narrowband_ff(const OpticalSetup& setup, double lower, double width, double power,
                     double time_window);
double narrowband_nf(const OpticalSetup& setup, double lower, double width, double power,
                     double time_window);
/// The near-field narrowband form rewritten as (dOmega T / 2 pi) copies of
/// the single-frequency capacity nu g(nbar / nu), with nbar(Omega) read off
/// P = (1/T)(dOmega T / 2 pi) hbar Omega nbar.
double narrowband_nf_single_frequency(const OpticalSetup& setup, double lower, double width,
                                      double power, double time_window);

struct BroadbandThresholds {
  /// P / (hbar Omega^2) must be at least this.
  double semiclassical_min = 100.0;
  /// q Omega must be at most this.
  double q_lower_max = 1.0;
};

struct BroadbandEstimate {
  double capacity = 0;  // bits per window T
  /// Solved for the infinite band starting at Omega.
  double q = 0;
  double q_lower = 0;           // q Omega
  double semiclassical = 0;     // P / (hbar Omega^2)
  double f_deviation = 0;       // |F(q Omega) - F(0)| / F(0)
  bool semiclassical_ok = true;
  bool q_lower_ok = true;

  bool regime_ok() const noexcept { return semiclassical_ok && q_lower_ok; }
};

/// Infinite-band near-field closed form
///   (beta pi^2 T / (3 15^(1/4))) (2 pi P / (beta hbar))^(3/4) log2(e),
/// with the validity checks evaluated and reported.
BroadbandEstimate capacity_nf_broadband(const OpticalSetup& setup, double lower, double power,
                                        double time_window,
                                        const BroadbandThresholds& thresholds = {});

/// The same limit taken directly from the integrals:
/// beta T G(0) / (2 pi q0^3) with q0 = (beta hbar F(0) / (2 pi P))^(1/4).
double capacity_nf_broadband_integral_form(const OpticalSetup& setup, double power,
                                           double time_window);

}  // namespace diffcap
