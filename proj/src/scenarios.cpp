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

#include "diffcap/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace diffcap {

namespace {

constexpr double kPi = std::numbers::pi;

void check_photons(double nbar, double nth) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar) || !(nth >= 0.0) || !std::isfinite(nth)) {
    std::ostringstream os;
    os << "scenario gains need finite nbar >= 0 and nth >= 0 (got " << nbar << ", " << nth
       << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

// Per-mode capacity with optional thermal background. No transmissivity
// range check: gains are reported even for setups outside their regime.
double mode_capacity(double signal, double nth) {
  return nth == 0.0 ? g(signal) : g_increment(nth, signal);
}

GatedValue ratio_of(double num, double den, bool regime_ok) {
  GatedValue v;
  v.regime_ok = regime_ok;
  if (den > 0.0 && std::isfinite(num)) v.value = num / den;
  return v;
}

}  // namespace

ScenarioParams scenario_params(const OpticalSetup& setup, const RegimeThresholds& thresholds) {
  thresholds.validate();
  ScenarioParams p{setup, thresholds, 0, 0, 0, 0, 0, 0, {}, {}};

  const double a = ratio(setup);
  p.eta_a = kPi * kPi * a * a * a * a;
  p.nu_a = kPi * a * a;

  const double fresnel = fresnel_number(setup);
  p.eta_b = kPi * fresnel;
  p.nu_b = p.eta_b;

  const double lo = setup.object_size() * setup.pupil_radius() /
                    (setup.wavelength() * setup.object_distance());
  const double li = setup.pupil_radius() * setup.magnification() * setup.object_size() /
                    (setup.wavelength() * setup.image_distance());
  p.eta_c_object_screen = kPi * lo * lo;
  p.eta_c_screen_image = kPi * li * li;

  p.regime_a = classify_ratio(a, thresholds);
  p.regime_b = classify_ratio(std::sqrt(fresnel), thresholds);
  return p;
}

GatedValue ratio_r1(const ScenarioParams& p) {
  const OpticalSetup& s = p.setup;
  const double m = s.magnification();
  const double x = s.pupil_radius() * s.pupil_radius() / (s.wavelength() * s.object_distance());
  const double k = (m + 1.0) / m;
  GatedValue v;
  v.value = kPi * x * x * k * k;
  v.regime_ok = p.regime_a.regime == Regime::FarField;
  return v;
}

GatedValue ratio_r2(const ScenarioParams& p) {
  const OpticalSetup& s = p.setup;
  const double m = s.magnification();
  const double k = (m + 1.0) / m;
  const double q = s.pupil_radius() / s.object_size();
  GatedValue v;
  v.value = k * k * q * q;
  v.regime_ok = p.regime_a.regime == Regime::NearField;
  return v;
}

GatedValue gain_G1(const ScenarioParams& p, double nbar, double nth) {
  check_photons(nbar, nth);
  const bool ok = p.regime_a.regime == Regime::FarField && p.regime_b.regime == Regime::FarField;
  return ratio_of(mode_capacity(p.eta_a * nbar, nth), mode_capacity(p.eta_b * nbar, nth), ok);
}

GatedValue gain_G2(const ScenarioParams& p, double nbar) {
  check_photons(nbar, 0.0);
  const double r2 = *ratio_r2(p).value;
  const bool ok = p.regime_a.regime == Regime::NearField &&
                  p.regime_b.regime == Regime::NearField && r2 > 1.0;
  return ratio_of(r2 * g(nbar / p.nu_a), g(r2 * nbar / p.nu_a), ok);
}

GatedValue gain_G3(const ScenarioParams& p, double nbar, double nth) {
  check_photons(nbar, nth);
  const bool ok = p.regime_a.regime == Regime::NearField && p.regime_b.regime == Regime::FarField;
  return ratio_of(p.nu_a * mode_capacity(nbar / p.nu_a, nth),
                  mode_capacity(p.eta_b * nbar, nth), ok);
}

PinholeBounds pinhole_bounds(const ScenarioParams& p) {
  PinholeBounds b;
  // Each leg transmits eta = pi (L R / lambda D)^2 as a far-field
  // free-space link, so the product is pi^2 (L R / lambda D_o)^4.
  b.eta_c.value = p.eta_c_object_screen * p.eta_c_screen_image;
  b.eta_c.regime_ok = p.regime_a.regime == Regime::FarField;
  // Near field: each leg passes pi (L R / lambda D)^2 modes; the chain
  // passes at most the smaller count.
  b.nu_c.value = std::min(p.eta_c_object_screen, p.eta_c_screen_image);
  b.nu_c.regime_ok = p.regime_a.regime == Regime::NearField;
  return b;
}

ComparisonReport compare_scenarios(const OpticalSetup& setup, double nbar, double nth,
                                   const RegimeThresholds& thresholds) {
  ScenarioParams params = scenario_params(setup, thresholds);
  ComparisonReport r{params,
                     nbar,
                     nth,
                     ratio_r1(params),
                     ratio_r2(params),
                     gain_G1(params, nbar, nth),
                     gain_G2(params, nbar),
                     gain_G3(params, nbar, nth),
                     pinhole_bounds(params)};
  return r;
}

}  // namespace diffcap
