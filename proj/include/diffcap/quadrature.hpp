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

#include <cstddef>
#include <functional>
#include <vector>

namespace diffcap {

struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending, in [-1, 1]
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1]; n >= 1.
GaussLegendreRule gauss_legendre(std::size_t n);

/// sin(pi x) / (pi x), with sinc(0) = 1.
double sinc(double x) noexcept;

struct AdaptiveResult {
  double value = 0;
  double error_estimate = 0;
};

/// Adaptive Gauss-Kronrod (G15/K31) on a finite interval. Throws
/// QuadratureNonconvergence unless the error estimate ends below
/// max(abs_tol, rel_tol * |value|).
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                  double b, double rel_tol = 1e-12,
                                  double abs_tol = 1e-10, unsigned max_depth = 18);

}  // namespace diffcap
