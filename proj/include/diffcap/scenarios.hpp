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

#include "diffcap/core.hpp"

namespace diffcap {

// Three ways of linking an object plane to an image plane at equal
// geometry:
//   (a) a refocusing lens of pupil scale R,
//   (b) free-space propagation over D = D_o + D_i,
//   (c) a pinhole of radius R in an absorbing screen at the lens position.

/// A dimensionless quantity whose defining formula holds only in some
/// regime. `value` is empty when it is undefined (a zero denominator);
/// `regime_ok` is false when the preconditions do not hold, in which case
/// the value is still reported for inspection.
struct GatedValue {
  std::optional<double> value;
  bool regime_ok = true;

  bool usable() const noexcept { return regime_ok && value.has_value(); }
};

struct ScenarioParams {
  OpticalSetup setup;
  RegimeThresholds thresholds;

  double eta_a = 0;  // pi^2 (L/x_R)^4
  double nu_a = 0;   // pi (L/x_R)^2
  double eta_b = 0;  // pi * Fresnel number
  double nu_b = 0;   // same expression as eta_b

  /// Pinhole legs, object -> screen and screen -> image.
  double eta_c_object_screen = 0;
  double eta_c_screen_image = 0;

  RegimeReport regime_a;  // by L/x_R
  /// By sqrt(Fresnel number) = M L^2 / ((M + 1) lambda D_o).
  RegimeReport regime_b;
};

ScenarioParams scenario_params(const OpticalSetup& setup,
                               const RegimeThresholds& thresholds = {});

/// pi (R^2 / (lambda D_o))^2 ((M + 1) / M)^2 = eta_a / eta_b.
/// Requires (a) in the far field.
GatedValue ratio_r1(const ScenarioParams& p);

/// ((M + 1) / M)^2 (R / L)^2 = nu_a / nu_b. Requires (a) in the near field.
GatedValue ratio_r2(const ScenarioParams& p);

/// C_(a) / C_(b) with both scenarios in the far field. With nth > 0 each
/// capacity g(eta n) becomes g(eta n + nth) - g(nth).
GatedValue gain_G1(const ScenarioParams& p, double nbar, double nth = 0.0);

/// r2 g(nbar / nu_a) / g(r2 nbar / nu_a). Requires both in the near field
/// and r2 > 1.
GatedValue gain_G2(const ScenarioParams& p, double nbar);

/// nu_a g(nbar / nu_a) / g(eta_b nbar), with (a) near field and (b) far
/// field. Thermal form replaces g(x) by g(x + nth) - g(nth) in both.
GatedValue gain_G3(const ScenarioParams& p, double nbar, double nth = 0.0);

struct PinholeBounds {
  /// eta_c^(o->s) eta_c^(s->i); needs (a) far field.
  GatedValue eta_c;
  /// pi (L R / (lambda D_o))^2 per leg; needs (a) near field.
  GatedValue nu_c;
};

PinholeBounds pinhole_bounds(const ScenarioParams& p);

struct ComparisonReport {
  ScenarioParams params;
  double nbar = 0;
  double nth = 0;
  GatedValue r1;
  GatedValue r2;
  GatedValue G1;
  GatedValue G2;
  GatedValue G3;
  PinholeBounds pinhole;
};

ComparisonReport compare_scenarios(const OpticalSetup& setup, double nbar, double nth = 0.0,
                                   const RegimeThresholds& thresholds = {});

}  // namespace diffcap
