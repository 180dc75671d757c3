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
#include <limits>
#include <numbers>

#include "diffcap/core.hpp"
#include "diffcap/error.hpp"
#include "oracles.hpp"

namespace diffcap {
namespace {

OpticalSetup unit_setup() { return OpticalSetup::from_magnification(5e-7, 1.0, 1.0, 1e-2, 1e-3); }

// --- g ----------------------------------------------------------------------

TEST(GFunction, ExactValues) {
  EXPECT_EQ(g(0.0), 0.0);
  EXPECT_NEAR(g(1.0), 2.0, 1e-12);
  EXPECT_NEAR(g(3.0), 4.0 * std::log2(4.0) - 3.0 * std::log2(3.0), 1e-12);
}

TEST(GFunction, NonPositiveArgumentsGiveZero) {
  for (double x : {-1e300, -5.0, -1e-300, -0.0, 0.0}) EXPECT_EQ(g(x), 0.0) << x;
}

TEST(GFunction, MatchesOracleAtPointEight) {
  // Frozen from the long-double oracle: 1.78393690770880...
  EXPECT_NEAR(g(0.8), 1.7839369077088, 1e-12);
  EXPECT_NEAR(g(0.8), oracle::g(0.8), 1e-13);
}

TEST(GFunction, MatchesOracleOnLogGrid) {
  for (double e = -12; e <= 12; e += 0.25) {
    const double x = std::pow(10.0, e);
    EXPECT_NEAR(g(x), oracle::g(x), 1e-13 * std::max(1.0, oracle::g(x))) << x;
  }
}

TEST(GFunction, ContinuousAtZero) {
  EXPECT_LT(g(1e-300), 1e-296);
  EXPECT_GT(g(1e-300), 0.0);
  EXPECT_TRUE(std::isfinite(g(std::numeric_limits<double>::denorm_min())));
}

TEST(GFunction, PositiveIncreasingConcaveOnLogGrid) {
  std::vector<double> xs;
  for (double e = -9; e <= 9.0001; e += 0.05) xs.push_back(std::pow(10.0, e));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_GT(g(xs[i]), 0.0);
    if (i > 0) EXPECT_GT(g(xs[i]), g(xs[i - 1]));
    if (i > 0 && i + 1 < xs.size()) {
      // Concavity on an uneven grid: the chord slopes decrease.
      const double s1 = (g(xs[i]) - g(xs[i - 1])) / (xs[i] - xs[i - 1]);
      const double s2 = (g(xs[i + 1]) - g(xs[i])) / (xs[i + 1] - xs[i]);
      EXPECT_LT(s2, s1) << xs[i];
    }
  }
}

TEST(GFunction, LargeArgumentAsymptote) {
  const double x = 1e8;
  EXPECT_NEAR(g(x) - (std::log2(x) + std::numbers::log2e), 0.0, 1e-6);
}

TEST(GFunction, SmallArgumentAsymptote) {
  const double x = 1e-12;
  EXPECT_NEAR(g(x) + x * std::log2(x), 0.0, 1e-9);
}

TEST(GFunction, IncrementAvoidsCancellation) {
  // g(base + d) - g(base), 50-digit reference values.
  struct Case {
    double base, d, ref;
  };
  const Case cases[] = {
      {0, 1e-14, 4.7949688369312043e-13},    {0, 1e-9, 3.1340047895596572e-8},
      {0, 1e-3, 0.011409200432742474},       {0, 1, 2.0},
      {1e-3, 1e-14, 9.9672262588287873e-14}, {1e-3, 1e-9, 9.9672255382093404e-9},
      {1e-3, 1e-3, 0.0094106416867693052},   {1e-3, 1, 1.9895904390737291},
      {1, 1e-14, 9.9999999999999639e-15},    {1, 1e-9, 9.9999999963932624e-10},
      {1, 1e-3, 0.00099963950647152894},     {1, 1, 0.75488750216346854},
      {10, 1e-14, 1.3750352374993484e-15},   {10, 1e-9, 1.375035237433772e-10},
      {10, 1e-3, 0.00013749696646248218},    {10, 1, 0.13133534750695802},
      {1e6, 1e-14, 1.4426943195419239e-20},  {1e6, 1e-9, 1.4426943195419231e-15},
      {1e6, 1e-3, 1.4426943188205771e-9},    {1e6, 1, 1.4426935981956057e-6},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(g_increment(c.base, c.d), c.ref, 1e-12 * c.ref) << c.base << " + " << c.d;
  }
  EXPECT_DOUBLE_EQ(g_increment(0.0, 0.5), g(0.5));
}

// --- setup ------------------------------------------------------------------

TEST(OpticalSetup, ThinLensAndMagnificationHold) {
  const auto s = OpticalSetup::from_focal_length(5e-7, 3.0, 1.0, 1e-2, 1e-3);
  EXPECT_NEAR(1 / s.object_distance() + 1 / s.image_distance(), 1 / s.focal_length(), 1e-12);
  EXPECT_NEAR(s.magnification(), s.image_distance() / s.object_distance(), 1e-12);
  EXPECT_NEAR(s.image_distance(), 1.5, 1e-12);

  const auto t = OpticalSetup::from_image_distance(5e-7, 2.0, 2.0, 1e-2, 1e-3);
  EXPECT_NEAR(t.focal_length(), 1.0, 1e-12);
  EXPECT_NEAR(t.magnification(), 1.0, 1e-12);

  const auto u = OpticalSetup::from_magnification(5e-7, 2.0, 3.0, 1e-2, 1e-3);
  EXPECT_NEAR(u.image_distance(), 6.0, 1e-12);
  EXPECT_NEAR(u.focal_length(), 1.5, 1e-12);
}

TEST(OpticalSetup, OverDeterminedInputIsChecked) {
  EXPECT_NO_THROW(OpticalSetup::from_all(5e-7, 2, 2, 1, 1e-2, 1e-3, 1));
  EXPECT_THROW(OpticalSetup::from_all(5e-7, 2, 2, 1.1, 1e-2, 1e-3, 1), Error);
  EXPECT_THROW(OpticalSetup::from_all(5e-7, 2, 2, 1, 1e-2, 1e-3, 2), Error);
}

TEST(OpticalSetup, RejectsNonPositiveFields) {
  const double nan = std::nan("");
  EXPECT_THROW(OpticalSetup::from_magnification(0, 1, 1, 1e-2, 1e-3), Error);
  EXPECT_THROW(OpticalSetup::from_magnification(5e-7, -1, 1, 1e-2, 1e-3), Error);
  EXPECT_THROW(OpticalSetup::from_magnification(5e-7, 1, 0, 1e-2, 1e-3), Error);
  EXPECT_THROW(OpticalSetup::from_magnification(5e-7, 1, 1, 0, 1e-3), Error);
  EXPECT_THROW(OpticalSetup::from_magnification(5e-7, 1, 1, 1e-2, nan), Error);
  // f >= D_o leaves no real image.
  EXPECT_THROW(OpticalSetup::from_focal_length(5e-7, 1, 1, 1e-2, 1e-3), Error);
  try {
    OpticalSetup::from_magnification(5e-7, 1, 1, -1, 1e-3);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidSetup);
    EXPECT_FALSE(e.is_numerical());
  }
}

TEST(OpticalSetup, WithRatioSetsObjectSize) {
  const auto s = unit_setup().with_ratio(7.5);
  EXPECT_NEAR(ratio(s), 7.5, 1e-14);
  EXPECT_NEAR(s.object_size(), 7.5 * rayleigh_length(s), 1e-18);
}

TEST(RayleighLength, Examples) {
  EXPECT_NEAR(rayleigh_length(unit_setup()), 5e-5, 1e-18);
  const auto s = OpticalSetup::from_magnification(5e-7, 2.0, 1.0, 1e-2, 1e-3);
  EXPECT_NEAR(rayleigh_length(s), 1e-4, 1e-18);
  const auto t = OpticalSetup::from_magnification(1e-6, 1.0, 1.0, 1e-2, 1e-3);
  EXPECT_NEAR(rayleigh_length(t), 2 * rayleigh_length(unit_setup()), 1e-18);
}

TEST(RayleighLength, Homogeneity) {
  const auto s = unit_setup();
  for (double k : {0.5, 3.0, 10.0}) {
    const auto a = OpticalSetup::from_magnification(k * 5e-7, 1, 1, 1e-2, 1e-3);
    const auto b = OpticalSetup::from_magnification(5e-7, k, 1, 1e-2, 1e-3);
    const auto c = OpticalSetup::from_magnification(5e-7, 1, 1, k * 1e-2, 1e-3);
    EXPECT_NEAR(rayleigh_length(a) / rayleigh_length(s), k, 1e-14 * k);
    EXPECT_NEAR(rayleigh_length(b) / rayleigh_length(s), k, 1e-14 * k);
    EXPECT_NEAR(rayleigh_length(c) / rayleigh_length(s), 1 / k, 1e-14 / k);
  }
}

TEST(FresnelNumber, Examples) {
  EXPECT_NEAR(fresnel_number(unit_setup()), 1.0, 1e-12);
  const auto s = OpticalSetup::from_magnification(5e-7, 1, 1, 1e-2, 1e-4);
  EXPECT_NEAR(fresnel_number(s), 1e-4, 1e-16);
  const auto t = unit_setup().with_object_size(2e-3);
  EXPECT_NEAR(fresnel_number(t) / fresnel_number(unit_setup()), 16.0, 1e-12);
}

TEST(FresnelNumber, Homogeneity) {
  // M^2 L^4 / (lambda D)^2 with D = D_o (1 + M).
  const auto s = OpticalSetup::from_magnification(6e-7, 1.5, 2.0, 1e-2, 2e-3);
  const double ref = 4.0 * std::pow(2e-3, 4) / std::pow(6e-7 * 1.5 * 3.0, 2);
  EXPECT_NEAR(fresnel_number(s), ref, 1e-12 * ref);
  for (double k : {0.5, 2.0, 7.0}) {
    const auto a = OpticalSetup::from_magnification(k * 6e-7, 1.5, 2.0, 1e-2, 2e-3);
    const auto b = OpticalSetup::from_magnification(6e-7, k * 1.5, 2.0, 1e-2, 2e-3);
    EXPECT_NEAR(fresnel_number(a) / ref, 1 / (k * k), 1e-12);
    EXPECT_NEAR(fresnel_number(b) / ref, 1 / (k * k), 1e-12);
  }
}

// --- regimes ----------------------------------------------------------------

TEST(Regime, FigureRatios) {
  const auto base = unit_setup();
  EXPECT_EQ(classify_regime(base.with_ratio(0.1)).regime, Regime::FarField);
  EXPECT_EQ(classify_regime(base.with_ratio(10)).regime, Regime::NearField);
  EXPECT_EQ(classify_regime(base.with_ratio(1)).regime, Regime::Intermediate);
  EXPECT_NEAR(classify_regime(base.with_ratio(10)).ratio, 10.0, 1e-12);
}

TEST(Regime, ThresholdsAreInclusiveAndReported) {
  const RegimeThresholds t{0.5, 2.0};
  EXPECT_EQ(classify_ratio(0.5, t).regime, Regime::FarField);
  EXPECT_EQ(classify_ratio(2.0, t).regime, Regime::NearField);
  EXPECT_EQ(classify_ratio(std::nextafter(0.5, 1.0), t).regime, Regime::Intermediate);
  EXPECT_EQ(classify_ratio(1.0, t).thresholds.far, 0.5);
  EXPECT_EQ(classify_ratio(1.0, t).thresholds.near, 2.0);
}

TEST(Regime, BadThresholdOrderingThrows) {
  EXPECT_THROW(classify_ratio(1.0, {5.0, 0.2}), Error);
  EXPECT_THROW(classify_ratio(1.0, {0.0, 5.0}), Error);
  EXPECT_THROW(classify_ratio(1.0, {1.0, 1.0}), Error);
}

// --- budget -----------------------------------------------------------------

TEST(PhotonBudget, ExactlyOneModeActive) {
  const auto a = PhotonBudget::photons(4.0);
  EXPECT_TRUE(a.is_photon_mode());
  EXPECT_FALSE(a.is_power_mode());
  EXPECT_EQ(a.total(), 4.0);

  const auto b = PhotonBudget::power(2e-3, 1e-6, 0.5);
  EXPECT_TRUE(b.is_power_mode());
  EXPECT_FALSE(b.is_photon_mode());
  EXPECT_NEAR(b.energy(), 2e-9, 1e-24);
  EXPECT_EQ(b.thermal_photons(), 0.5);
}

TEST(PhotonBudget, Validation) {
  EXPECT_THROW(PhotonBudget::photons(-1.0), Error);
  EXPECT_THROW(PhotonBudget::photons(1.0, -1.0), Error);
  EXPECT_THROW(PhotonBudget::power(1.0, 0.0), Error);
  EXPECT_THROW(PhotonBudget::power(std::nan(""), 1.0), Error);
  EXPECT_NO_THROW(PhotonBudget::photons(0.0));
}

}  // namespace
}  // namespace diffcap
