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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "diffcap/error.hpp"
#include "diffcap/scenarios.hpp"
#include "oracles.hpp"

namespace diffcap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLambda = 5e-7;

// Setup with given L/x_R (a), sqrt(Fresnel) (f) and magnification, at
// D_o = 1 and lambda = 500 nm. L and R follow from
//   a = L R / (lambda D_o),  f = M L^2 / ((M + 1) lambda D_o).
OpticalSetup by_regimes(double a, double f, double m = 1.0) {
  const double l = std::sqrt(f * (m + 1) / m * kLambda);
  const double r = a * kLambda / l;
  return OpticalSetup::from_magnification(kLambda, 1.0, m, r, l);
}

// Setup with the given r1 and L/x_R.
OpticalSetup by_r1(double r1, double a, double m = 1.0) {
  const double r = std::sqrt(kLambda * std::sqrt(r1 / kPi) * m / (m + 1));
  return OpticalSetup::from_magnification(kLambda, 1.0, m, r, a * kLambda / r);
}

// Independent transcription of the transmissivity formulas.
double eta_b_ref(const OpticalSetup& s) {
  const double m = s.magnification();
  const double x = s.object_size() * s.object_size() / (s.wavelength() * s.object_distance());
  return kPi * std::pow(m / (m + 1), 2) * x * x;
}
double lr(const OpticalSetup& s) {
  return s.object_size() * s.pupil_radius() / (s.wavelength() * s.object_distance());
}

OpticalSetup random_setup(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  const double lambda = 1e-7 * std::pow(100.0, u(rng));
  const double d_o = 0.01 * std::pow(1e4, u(rng));
  const double m = 0.1 * std::pow(100.0, u(rng));
  const double r = 1e-4 * std::pow(1e3, u(rng));
  const double l = 1e-5 * std::pow(1e4, u(rng));
  return OpticalSetup::from_magnification(lambda, d_o, m, r, l);
}

// --- parameters -----------------------------------------------------------------

TEST(ScenarioParams, TransmissivitiesAndModeCounts) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_setup(rng);
    const auto p = scenario_params(s);
    const double a = lr(s);
    EXPECT_NEAR(p.eta_a, kPi * kPi * std::pow(a, 4), 1e-12 * p.eta_a);
    EXPECT_NEAR(p.nu_a, kPi * a * a, 1e-12 * p.nu_a);
    EXPECT_NEAR(p.eta_b, eta_b_ref(s), 1e-12 * p.eta_b);
    EXPECT_NEAR(p.eta_b, kPi * fresnel_number(s), 1e-12 * p.eta_b);
    EXPECT_EQ(p.nu_b, p.eta_b);
  }
}

TEST(ScenarioParams, RegimesClassifiedIndependently) {
  const auto p = scenario_params(by_regimes(10, 0.1));
  EXPECT_EQ(p.regime_a.regime, Regime::NearField);
  EXPECT_EQ(p.regime_b.regime, Regime::FarField);
  EXPECT_NEAR(p.regime_b.ratio, 0.1, 1e-12);
  const auto q = scenario_params(by_regimes(0.1, 0.01));
  EXPECT_EQ(q.regime_a.regime, Regime::FarField);
  EXPECT_EQ(q.regime_b.regime, Regime::FarField);
}

// --- r1, r2 ---------------------------------------------------------------------

TEST(Ratios, R1Example) {
  const auto s = OpticalSetup::from_magnification(5e-7, 1.0, 1.0, 1e-2, 5e-6);
  const auto r1 = ratio_r1(scenario_params(s));
  EXPECT_NEAR(*r1.value, 502654.8245743669, 1e-3 * 502654.8);
  EXPECT_TRUE(r1.regime_ok);
}

TEST(Ratios, R1MagnificationFactorTendsToOne) {
  const auto base = OpticalSetup::from_magnification(5e-7, 1.0, 1e9, 1e-2, 1e-5);
  const double x = 1e-4 / 5e-7;
  EXPECT_NEAR(*ratio_r1(scenario_params(base)).value / (kPi * x * x), 1.0, 1e-8);
}

TEST(Ratios, R2Examples) {
  const auto s = OpticalSetup::from_magnification(5e-7, 1.0, 1.0, 1e-2, 1e-2);
  EXPECT_NEAR(*ratio_r2(scenario_params(s)).value, 4.0, 1e-15);
  const auto t = OpticalSetup::from_magnification(5e-7, 1.0, 1.0, 1e-2, 2e-2);
  EXPECT_NEAR(*ratio_r2(scenario_params(t)).value, 1.0, 1e-15);
}

TEST(Ratios, IdentitiesOnRandomSetups) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto p = scenario_params(random_setup(rng));
    EXPECT_NEAR(*ratio_r1(p).value, p.eta_a / p.eta_b, 1e-12 * p.eta_a / p.eta_b);
    EXPECT_NEAR(*ratio_r2(p).value, p.nu_a / p.nu_b, 1e-12 * p.nu_a / p.nu_b);
  }
}

TEST(Ratios, Gating) {
  EXPECT_TRUE(ratio_r1(scenario_params(by_regimes(0.1, 0.01))).regime_ok);
  EXPECT_FALSE(ratio_r1(scenario_params(by_regimes(10, 0.1))).regime_ok);
  EXPECT_TRUE(ratio_r2(scenario_params(by_regimes(10, 0.1))).regime_ok);
  EXPECT_FALSE(ratio_r2(scenario_params(by_regimes(1, 0.1))).regime_ok);
  // Gated values still carry the raw number.
  EXPECT_TRUE(ratio_r2(scenario_params(by_regimes(1, 0.1))).value.has_value());
}

TEST(Ratios, FarFieldImplication) {
  // (a) far field and r1 > 1 put (b) in the far field as well.
  std::mt19937_64 rng(3);
  int checked = 0;
  int draws = 0;
  while (checked < 1000 && draws < 1'000'000) {
    ++draws;
    const auto s = random_setup(rng);
    const auto p = scenario_params(s);
    if (p.regime_a.regime != Regime::FarField || *ratio_r1(p).value <= 1.0) continue;
    ++checked;
    EXPECT_EQ(p.regime_b.regime, Regime::FarField) << "draw " << draws;
    // sqrt(F) = (L/x_R)^2 sqrt(pi / r1)
    EXPECT_NEAR(p.regime_b.ratio, std::pow(p.regime_a.ratio, 2) * std::sqrt(kPi / *ratio_r1(p).value),
                1e-12 * p.regime_b.ratio);
  }
  EXPECT_EQ(checked, 1000);
}

// --- gains ----------------------------------------------------------------------

TEST(GainG1, TendsToOneForLargePhotonNumber) {
  const auto p = scenario_params(by_r1(2.0, 0.1));
  ASSERT_NEAR(*ratio_r1(p).value, 2.0, 1e-12);
  const auto g1 = gain_G1(p, 1e12);
  EXPECT_TRUE(g1.regime_ok);
  EXPECT_LT(std::abs(*g1.value - 1), 0.05);
}

TEST(GainG1, LargeR1ApproachesOneLogarithmically) {
  // G1 - 1 ~ ln r1 / (ln(eta_b n) + 1) once eta_b n >> 1.
  const auto p = scenario_params(by_regimes(0.1, 0.01));
  const double r1 = *ratio_r1(p).value;
  for (double n : {1e12, 1e18, 1e24}) {
    const double dev = *gain_G1(p, n).value - 1;
    const double law = std::log(r1) / (std::log(p.eta_b * n) + 1);
    EXPECT_NEAR(dev / law, 1.0, 0.05) << n;
  }
}

TEST(GainG1, ThermalLimitIsR1) {
  const auto p = scenario_params(by_regimes(0.1, 0.01));
  const double r1 = *ratio_r1(p).value;
  EXPECT_NEAR(*gain_G1(p, 1e-8, 10).value, r1, 1e-4 * r1);
  EXPECT_NEAR(*gain_G1(p, 1e-9, 10).value, r1, 1e-3 * r1);
}

TEST(GainG1, UnitR1GivesUnitGain) {
  const auto p = scenario_params(by_r1(1.0, 0.1));
  for (double n = 1e-6; n < 1e9; n *= 10) EXPECT_NEAR(*gain_G1(p, n).value, 1.0, 1e-12) << n;
}

TEST(GainG1, MonotoneOverSixDecades) {
  for (const auto& s : {by_regimes(0.1, 0.01), by_r1(3.0, 0.15), by_regimes(0.2, 0.05)}) {
    const auto p = scenario_params(s);
    double prev = *gain_G1(p, 1e-3).value;
    for (double n = 1e-3 * 1.25; n <= 1e3; n *= 1.25) {
      const double v = *gain_G1(p, n).value;
      EXPECT_LT(v, prev) << n;
      prev = v;
    }
  }
}

TEST(GainG2, LimitsFollowTheLogarithmicLaw) {
  const auto p = scenario_params(by_regimes(10, 6));
  const double r2 = *ratio_r2(p).value;
  ASSERT_GT(r2, 1.0);
  // Small n: G2 - 1 ~ ln r2 / ln(e nu_a / (r2 n)).
  const double small = 1e-9;
  EXPECT_NEAR((*gain_G2(p, small).value - 1) / (std::log(r2) / std::log(std::exp(1) * p.nu_a / (r2 * small))),
              1.0, 0.02);
  // Large n: 1 - G2/r2 ~ ln r2 / (ln(r2 n / nu_a) + 1).
  const double large = 1e9 * p.nu_a;
  EXPECT_NEAR((1 - *gain_G2(p, large).value / r2) / (std::log(r2) / (std::log(r2 * 1e9) + 1)), 1.0,
              0.02);
}

TEST(GainG2, NearUnitR2MeetsTightLimits) {
  // r2 = 1.01: both limits within the quoted tolerances.
  const auto s = by_regimes(10, 6);
  const double r = 0.5 * std::sqrt(1.01) * s.object_size();
  const auto t = OpticalSetup::from_magnification(kLambda, 1.0, 1.0, r, s.object_size());
  const auto p = scenario_params(t);
  ASSERT_NEAR(*ratio_r2(p).value, 1.01, 1e-12);
  EXPECT_LT(std::abs(*gain_G2(p, 1e-9).value - 1), 1e-3);
  EXPECT_LT(std::abs(*gain_G2(p, 1e9 * p.nu_a).value / 1.01 - 1), 1e-2);
}

TEST(GainG2, MonotoneOverSixDecades) {
  const auto p = scenario_params(by_regimes(10, 6));
  double prev = *gain_G2(p, 1e-3).value;
  for (double n = 1e-3 * 1.25; n <= 1e3; n *= 1.25) {
    const double v = *gain_G2(p, n).value;
    EXPECT_GT(v, prev) << n;
    prev = v;
  }
}

TEST(GainG2, Gating) {
  EXPECT_TRUE(gain_G2(scenario_params(by_regimes(10, 6)), 1).regime_ok);
  EXPECT_FALSE(gain_G2(scenario_params(by_regimes(10, 0.1)), 1).regime_ok);
  // r2 <= 1 is outside the comparison's domain.
  const auto s = OpticalSetup::from_magnification(kLambda, 1.0, 1.0, 1e-2, 2e-2);
  const auto p = scenario_params(s);
  ASSERT_LE(*ratio_r2(p).value, 1.0);
  EXPECT_FALSE(gain_G2(p, 1).regime_ok);
}

TEST(GainG3, LargePhotonNumberApproachesModeCount) {
  const auto p = scenario_params(by_regimes(5, 0.1));
  const auto g3 = gain_G3(p, 1e9 * p.nu_a);
  EXPECT_TRUE(g3.regime_ok);
  EXPECT_NEAR(*g3.value, p.nu_a, 0.05 * p.nu_a);
  // The deviation follows ln(eta_b nu_a) / (ln(eta_b nu_a 1e9) + 1).
  const double x = p.eta_b * p.nu_a;
  EXPECT_NEAR((1 - *g3.value / p.nu_a) / (std::log(x) / (std::log(x * 1e9) + 1)), 1.0, 0.02);
}

TEST(GainG3, ThermalSmallSignalLimit) {
  const auto p = scenario_params(by_regimes(8, 0.1));
  const double nth = 3.0;
  EXPECT_NEAR(*gain_G3(p, 1e-10 * nth, nth).value, 1 / p.eta_b, 1e-3 / p.eta_b);
  EXPECT_NEAR(*gain_G1(scenario_params(by_regimes(0.1, 0.01)), 1e-10 * nth, nth).value,
              *ratio_r1(scenario_params(by_regimes(0.1, 0.01))).value,
              1e-3 * *ratio_r1(scenario_params(by_regimes(0.1, 0.01))).value);
}

TEST(GainG3, Gating) {
  EXPECT_TRUE(gain_G3(scenario_params(by_regimes(10, 0.1)), 1).regime_ok);
  EXPECT_FALSE(gain_G3(scenario_params(by_regimes(10, 6)), 1).regime_ok);
  EXPECT_FALSE(gain_G3(scenario_params(by_regimes(0.1, 0.01)), 1).regime_ok);
}

TEST(Gains, UndefinedAtZeroPhotons) {
  const auto p = scenario_params(by_regimes(0.1, 0.01));
  EXPECT_FALSE(gain_G1(p, 0).value.has_value());
  EXPECT_FALSE(gain_G1(p, 0).usable());
  EXPECT_FALSE(gain_G2(scenario_params(by_regimes(10, 6)), 0).value.has_value());
  EXPECT_FALSE(gain_G3(scenario_params(by_regimes(10, 0.1)), 0).value.has_value());
  EXPECT_THROW(gain_G1(p, -1), Error);
}

// Tiny transmissivities can underflow g to zero, so only sign and finiteness.
TEST(Gains, NonNegativeWhenDefined) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const auto r = compare_scenarios(random_setup(rng), 0.5, i % 2 ? 0.0 : 2.0);
    for (const auto* v : {&r.G1, &r.G2, &r.G3}) {
      if (v->value) {
        EXPECT_GE(*v->value, 0.0);
        EXPECT_TRUE(std::isfinite(*v->value));
      }
    }
  }
}

TEST(Gains, ScaleInvariance) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_setup(rng);
    for (double k : {1e-3, 7.0, 1e4}) {
      const auto t = OpticalSetup::from_magnification(k * s.wavelength(), k * s.object_distance(),
                                                      s.magnification(), k * s.pupil_radius(),
                                                      k * s.object_size());
      const auto a = compare_scenarios(s, 3.0, 0.5);
      const auto b = compare_scenarios(t, 3.0, 0.5);
      const auto same = [](const GatedValue& x, const GatedValue& y) {
        EXPECT_EQ(x.regime_ok, y.regime_ok);
        ASSERT_EQ(x.value.has_value(), y.value.has_value());
        if (x.value) EXPECT_NEAR(*x.value, *y.value, 1e-12 * std::abs(*x.value));
      };
      same(a.r1, b.r1);
      same(a.r2, b.r2);
      same(a.G1, b.G1);
      same(a.G2, b.G2);
      same(a.G3, b.G3);
      same(a.pinhole.eta_c, b.pinhole.eta_c);
      same(a.pinhole.nu_c, b.pinhole.nu_c);
      EXPECT_NEAR(a.params.eta_b, b.params.eta_b, 1e-12 * a.params.eta_b);
    }
  }
}

// --- pinhole ----------------------------------------------------------------------

TEST(Pinhole, BoundsEqualRefocusingValues) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 500; ++i) {
    const auto p = scenario_params(random_setup(rng));
    const auto b = pinhole_bounds(p);
    EXPECT_NEAR(*b.eta_c.value, p.eta_a, 1e-12 * p.eta_a);
    EXPECT_NEAR(*b.nu_c.value, p.nu_a, 1e-12 * p.nu_a);
    EXPECT_NEAR(p.eta_c_object_screen, p.eta_c_screen_image, 1e-12 * p.eta_c_object_screen);
    EXPECT_NEAR(p.eta_c_object_screen, kPi * std::pow(lr(p.setup), 2), 1e-12 * p.eta_c_object_screen);
  }
}

TEST(Pinhole, Gating) {
  const auto far = pinhole_bounds(scenario_params(by_regimes(0.1, 0.01)));
  EXPECT_TRUE(far.eta_c.regime_ok);
  EXPECT_FALSE(far.nu_c.regime_ok);
  const auto near = pinhole_bounds(scenario_params(by_regimes(10, 0.1)));
  EXPECT_FALSE(near.eta_c.regime_ok);
  EXPECT_TRUE(near.nu_c.regime_ok);
}

TEST(Compare, ReportCarriesEverything) {
  const auto r = compare_scenarios(by_regimes(10, 0.1), 2.0, 0.0);
  EXPECT_EQ(r.nbar, 2.0);
  EXPECT_FALSE(r.G1.regime_ok);
  EXPECT_TRUE(r.G3.regime_ok);
  EXPECT_FALSE(r.G2.regime_ok);
  EXPECT_TRUE(r.r2.usable());
  EXPECT_THROW(compare_scenarios(by_regimes(10, 0.1), 1.0, 0.0, {5.0, 0.2}), Error);
}

}  // namespace
}  // namespace diffcap
