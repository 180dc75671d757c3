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

#include "diffcap/error.hpp"
#include "diffcap/quadrature.hpp"
#include "oracles.hpp"

namespace diffcap {
namespace {

TEST(GaussLegendre, WeightsSumToTwoAndNodesAreSymmetric) {
  for (std::size_t n : {1u, 2u, 5u, 32u, 101u, 512u}) {
    const auto r = gauss_legendre(n);
    double sum = 0;
    for (double w : r.weights) sum += w;
    EXPECT_NEAR(sum, 2.0, 1e-13) << n;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_DOUBLE_EQ(r.nodes[i], -r.nodes[n - 1 - i]);
      if (i > 0) EXPECT_GT(r.nodes[i], r.nodes[i - 1]);
    }
  }
}

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
  for (std::size_t n : {3u, 8u, 20u}) {
    const auto r = gauss_legendre(n);
    for (std::size_t k = 0; k <= 2 * n - 1; ++k) {
      double q = 0;
      for (std::size_t i = 0; i < n; ++i) q += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(q, exact, 1e-13) << "n=" << n << " k=" << k;
    }
  }
}

TEST(GaussLegendre, ZeroOrderRejected) { EXPECT_THROW(gauss_legendre(0), Error); }

TEST(Sinc, ConventionAndRemovableSingularity) {
  EXPECT_EQ(sinc(0.0), 1.0);
  for (int k = 1; k <= 5; ++k) EXPECT_NEAR(sinc(k), 0.0, 1e-15);
  EXPECT_NEAR(sinc(0.5), 2 / std::numbers::pi, 1e-15);
  for (double x : {1e-9, 1e-6, 3e-5, 1e-4, 0.3, -2.7}) EXPECT_NEAR(sinc(x), oracle::sinc(x), 1e-15);
}

TEST(IntegrateAdaptive, SmoothAndPeakedIntegrands) {
  const auto a = integrate_adaptive([](double x) { return std::exp(-x); }, 0, 50, 1e-12, 1e-14);
  EXPECT_NEAR(a.value, 1 - std::exp(-50.0), 1e-13);
  const auto b = integrate_adaptive([](double x) { return 1 / (1e-4 + x * x); }, -1, 1, 1e-10, 0);
  EXPECT_NEAR(b.value, 2 * std::atan(1 / 1e-2) / 1e-2, 1e-10 * b.value);
  EXPECT_EQ(integrate_adaptive([](double) { return 1.0; }, 2, 2).value, 0.0);
}

TEST(IntegrateAdaptive, ThrowsWhenToleranceUnreachable) {
  const auto f = [](double x) { return x < 0.3141 ? 0.0 : 1.0 / std::sqrt(x - 0.3141 + 1e-300); };
  try {
    integrate_adaptive(f, 0, 1, 1e-15, 0, 2);
    FAIL() << "expected nonconvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::QuadratureNonconvergence);
    EXPECT_TRUE(e.is_numerical());
  }
}

}  // namespace
}  // namespace diffcap
