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
#include <string>
#include <string_view>
#include <vector>

#include "diffcap/core.hpp"
#include "diffcap/transfer.hpp"

namespace diffcap {

/// g(eta * nbar). Throws InvalidArgument outside eta in [0, 1], nbar >= 0.
double lossy_capacity(double eta, double nbar);

/// g(eta * nbar + nth) - g(nth).
double thermal_capacity(double eta, double nbar, double nth);

/// Modes below this transmissivity are left out of water-filling.
inline constexpr double kNegligibleTransmissivity = 1e-12;

struct PhotonAllocation {
  /// Mean photons per mode, aligned with the input transmissivities.
  std::vector<double> photons;
  /// Lagrange multiplier: bits per photon (photon budget) or per joule
  /// (power budget). Infinite when the budget is zero.
  double multiplier = 0;
  /// |spent - budget| / budget after the final renormalisation.
  double residual = 0;
};

enum class Method { NumericalSvd, ClosedFormFarField, ClosedFormNearField };

std::string_view to_string(Method method) noexcept;

struct Provenance {
  Method method = Method::NumericalSvd;
  int dimension = 0;  // 0 when unknown (bare spectra)
  bool polarized = false;

  /// e.g. "closed-form-nf/2D/polarized".
  std::string tag() const;
};

struct CapacityResult {
  double capacity = 0;  // bits per use
  PhotonAllocation allocation;
  std::optional<RegimeReport> regime;
  Provenance provenance;
  /// Closed form evaluated outside its regime.
  bool regime_violation = false;
  /// Positive budget but every transmissivity negligible.
  bool no_transmission = false;

  /// Number of modes that received photons.
  std::size_t effective_modes() const noexcept;
};

/// A bundle of `multiplicity` identical modes of transmissivity `eta`,
/// charged `cost` budget units per photon sent into the bundle. The bundle
/// contributes multiplicity * [g(eta n / multiplicity + nth) - g(nth)].
/// `eta` may exceed 1 here so closed forms can be swept outside their
/// regime; the physical entry points check it.
struct ParallelChannel {
  double eta = 1;
  double multiplicity = 1;
  double cost = 1;
};

/// Lagrange solve over bundles:
///   n_j = (multiplicity_j / eta_j) [1 / (2^(mu cost_j / eta_j) - 1) - nth]_+
/// with mu bisected until sum_j cost_j n_j = budget.
CapacityResult waterfill_channels(const std::vector<ParallelChannel>& channels, double budget,
                                  double nth = 0.0);

/// Optimal split of a budget over parallel lossy modes, maximising
/// sum_j [g(eta_j n_j + nth) - g(nth)]. The stationarity condition
///
///   eta_j n_j + nth = 1 / (2^(mu c_j / eta_j) - 1)
///
/// with c_j = 1 (photon budget) or hbar omega_j (power budget, spend
/// E = P T) is solved for mu by bisection.
///
/// `omegas` (rad/s) is required for a power budget and ignored otherwise.
CapacityResult waterfill(const std::vector<double>& etas, const PhotonBudget& budget,
                         const std::vector<double>& omegas = {});

/// Water-filling over a numerically obtained spectrum.
CapacityResult capacity_numerical(const TransmissivitySpectrum& spectrum,
                                  const PhotonBudget& budget,
                                  const std::vector<double>& omegas = {});

// Closed forms. Evaluated unconditionally; outside their regime the result
// is flagged rather than rejected.

/// g(pi^2 (L/x_R)^4 nbar), or 2 g(pi^2 (L/x_R)^4 nbar / 2) when polarized.
CapacityResult capacity_ff_2d(const OpticalSetup& setup, double nbar, bool polarized = false,
                              const RegimeThresholds& thresholds = {});

/// nu g(nbar / nu), nu = pi (L/x_R)^2; polarized: 2 nu g(nbar / (2 nu)).
CapacityResult capacity_nf_2d(const OpticalSetup& setup, double nbar, bool polarized = false,
                              const RegimeThresholds& thresholds = {});

/// g(2 (L/x_R) nbar).
CapacityResult capacity_ff_1d(const OpticalSetup& setup, double nbar,
                              const RegimeThresholds& thresholds = {});

/// (2 L/x_R) g(nbar x_R / (2 L)).
CapacityResult capacity_nf_1d(const OpticalSetup& setup, double nbar,
                              const RegimeThresholds& thresholds = {});

}  // namespace diffcap
