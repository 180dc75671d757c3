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

#include "diffcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace diffcap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "transmissivity must lie in [0, 1] (got " << eta << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

void check_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be finite and >= 0 (got " << v << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

}  // namespace

double lossy_capacity(double eta, double nbar) {
  check_eta(eta);
  check_nonnegative(nbar, "mean photon number");
  return g(eta * nbar);
}

double thermal_capacity(double eta, double nbar, double nth) {
  check_eta(eta);
  check_nonnegative(nbar, "mean photon number");
  check_nonnegative(nth, "thermal photon number");
  if (nth == 0.0) return g(eta * nbar);
  return g_increment(nth, eta * nbar);
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::NumericalSvd: return "numerical-SVD";
    case Method::ClosedFormFarField: return "closed-form-ff";
    case Method::ClosedFormNearField: return "closed-form-nf";
  }
  return "unknown";
}

std::string Provenance::tag() const {
  std::string out(to_string(method));
  if (dimension == 1) out += "/1D";
  if (dimension == 2) out += "/2D";
  if (polarized) out += "/polarized";
  return out;
}

std::size_t CapacityResult::effective_modes() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(allocation.photons.begin(), allocation.photons.end(),
                    [](double n) { return n > 0.0; }));
}

// --- water-filling ---------------------------------------------------------

namespace {

// Photons in one bundle at multiplier mu.
double photons_at(const ParallelChannel& c, double mu, double nth) {
  const double occupation = 1.0 / std::expm1(mu * c.cost * kLn2 / c.eta);
  if (!std::isfinite(occupation)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, (occupation - nth) * c.multiplicity / c.eta);
}

double spend_at(const std::vector<ParallelChannel>& channels,
                const std::vector<std::size_t>& active, double mu, double nth) {
  double total = 0.0;
  for (std::size_t j : active) total += channels[j].cost * photons_at(channels[j], mu, nth);
  return total;
}

double bundle_capacity(const ParallelChannel& c, double n, double nth) {
  const double signal = c.eta * n / c.multiplicity;
  return c.multiplicity * (nth == 0.0 ? g(signal) : g_increment(nth, signal));
}

}  // namespace

CapacityResult waterfill_channels(const std::vector<ParallelChannel>& channels, double budget,
                                  double nth) {
  check_nonnegative(budget, "budget");
  check_nonnegative(nth, "thermal photon number");
  for (const auto& c : channels) {
    if (!(c.eta >= 0.0) || !std::isfinite(c.eta) || !(c.multiplicity > 0.0) ||
        !std::isfinite(c.multiplicity) || !(c.cost > 0.0) || !std::isfinite(c.cost)) {
      throw Error(ErrorKind::InvalidArgument,
                  "water-filling: channels need eta >= 0, multiplicity > 0 and cost > 0");
    }
  }

  CapacityResult result;
  result.provenance.method = Method::NumericalSvd;
  result.allocation.photons.assign(channels.size(), 0.0);
  result.allocation.multiplier = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < channels.size(); ++j) {
    if (channels[j].eta >= kNegligibleTransmissivity) active.push_back(j);
  }
  if (budget == 0.0) return result;
  if (active.empty()) {
    result.no_transmission = true;
    return result;
  }

  // Lower bracket: the multiplier at which the single most favourable
  // bundle would absorb the whole budget. Everything else only adds.
  double mu_lo = 0.0;
  for (std::size_t j : active) {
    const auto& c = channels[j];
    const double occupation = c.eta * budget / (c.cost * c.multiplicity) + nth;
    mu_lo = std::max(mu_lo, (c.eta / c.cost) * std::log2(1.0 + 1.0 / occupation));
  }
  double mu_hi = mu_lo;
  int grow = 0;
  while (spend_at(channels, active, mu_hi, nth) > budget) {
    mu_hi *= 2.0;
    if (++grow > 1'000'000 || !std::isfinite(mu_hi)) {
      throw Error(ErrorKind::Nonconvergence, "water-filling: could not bracket the multiplier");
    }
  }
  if (grow > 0) mu_lo = mu_hi / 2.0;

  double mu = mu_hi;
  for (int iter = 0; iter < 200 && grow > 0; ++iter) {
    mu = 0.5 * (mu_lo + mu_hi);
    const double spent = spend_at(channels, active, mu, nth);
    if (std::abs(spent - budget) <= 1e-12 * budget) break;
    (spent > budget ? mu_lo : mu_hi) = mu;
    if (mu_hi - mu_lo <= 1e-17 * mu_hi) break;
  }

  double spent = 0.0;
  for (std::size_t j : active) {
    const double n = photons_at(channels[j], mu, nth);
    result.allocation.photons[j] = n;
    spent += channels[j].cost * n;
  }
  if (!(spent > 0.0) || !std::isfinite(spent)) {
    throw Error(ErrorKind::Nonconvergence, "water-filling: degenerate allocation");
  }
  // Absorb the leftover bisection residual proportionally.
  const double scale = budget / spent;
  double check = 0.0;
  double capacity = 0.0;
  for (std::size_t j : active) {
    double& n = result.allocation.photons[j];
    n *= scale;
    check += channels[j].cost * n;
    capacity += bundle_capacity(channels[j], n, nth);
  }
  result.allocation.multiplier = mu;
  result.allocation.residual = std::abs(check - budget) / budget;
  result.capacity = capacity;
  return result;
}

CapacityResult waterfill(const std::vector<double>& etas, const PhotonBudget& budget,
                         const std::vector<double>& omegas) {
  for (double eta : etas) check_eta(eta);
  const bool power = budget.is_power_mode();
  if (power && omegas.size() != etas.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "water-filling: a power budget needs one frequency per mode");
  }
  std::vector<ParallelChannel> channels(etas.size());
  for (std::size_t j = 0; j < etas.size(); ++j) {
    channels[j].eta = etas[j];
    if (power) {
      if (!(omegas[j] > 0.0) || !std::isfinite(omegas[j])) {
        throw Error(ErrorKind::InvalidArgument, "water-filling: frequencies must be > 0");
      }
      channels[j].cost = constants::hbar * omegas[j];
    }
  }
  return waterfill_channels(channels, budget.total(), budget.thermal_photons());
}

CapacityResult capacity_numerical(const TransmissivitySpectrum& spectrum,
                                  const PhotonBudget& budget,
                                  const std::vector<double>& omegas) {
  return waterfill(spectrum.values(), budget, omegas);
}

// --- closed forms ------------------------------------------------------------

namespace {

CapacityResult closed_form(double capacity, const OpticalSetup& setup, Method method,
                           int dimension, bool polarized, const RegimeThresholds& thresholds) {
  CapacityResult result;
  result.capacity = capacity;
  result.provenance = {method, dimension, polarized};
  result.regime = classify_regime(setup, thresholds);
  const Regime wanted =
      method == Method::ClosedFormFarField ? Regime::FarField : Regime::NearField;
  result.regime_violation = result.regime->regime != wanted;
  return result;
}

}  // namespace

CapacityResult capacity_ff_2d(const OpticalSetup& setup, double nbar, bool polarized,
                              const RegimeThresholds& thresholds) {
  check_nonnegative(nbar, "mean photon number");
  const double a = ratio(setup);
  const double eta = kPi * kPi * a * a * a * a;
  const double c = polarized ? 2.0 * g(eta * nbar / 2.0) : g(eta * nbar);
  return closed_form(c, setup, Method::ClosedFormFarField, 2, polarized, thresholds);
}

CapacityResult capacity_nf_2d(const OpticalSetup& setup, double nbar, bool polarized,
                              const RegimeThresholds& thresholds) {
  check_nonnegative(nbar, "mean photon number");
  const double a = ratio(setup);
  const double nu = (polarized ? 2.0 : 1.0) * kPi * a * a;
  return closed_form(nu * g(nbar / nu), setup, Method::ClosedFormNearField, 2, polarized,
                     thresholds);
}

CapacityResult capacity_ff_1d(const OpticalSetup& setup, double nbar,
                              const RegimeThresholds& thresholds) {
  check_nonnegative(nbar, "mean photon number");
  return closed_form(g(2.0 * ratio(setup) * nbar), setup, Method::ClosedFormFarField, 1, false,
                     thresholds);
}

CapacityResult capacity_nf_1d(const OpticalSetup& setup, double nbar,
                              const RegimeThresholds& thresholds) {
  check_nonnegative(nbar, "mean photon number");
  const double modes = 2.0 * ratio(setup);
  return closed_form(modes * g(nbar / modes), setup, Method::ClosedFormNearField, 1, false,
                     thresholds);
}

}  // namespace diffcap
