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

#include "diffcap/broadband.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "diffcap/capacity.hpp"
#include "diffcap/quadrature.hpp"

namespace diffcap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance of every band integral.
constexpr double kIntegralRelTol = 1e-10;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be finite and > 0 (got " << v << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

void require_power(double power) {
  if (!(power >= 0.0) || !std::isfinite(power)) {
    throw Error(ErrorKind::InvalidArgument, "power must be finite and >= 0");
  }
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  return integrate_adaptive(f, a, b, kIntegralRelTol, 0.0).value;
}

// Upper end of an improper integral: the integrands are bounded by
// x^3 e^-x, so the tail beyond max(50, z + 50) is below 1e-15.
double truncate_upper(double a, double b) {
  return std::min(b, std::max(50.0, a + 50.0));
}

double bose_power(double x) {
  if (x <= 0.0) return 0.0;
  return x * x * x / std::expm1(x);
}

double bose_capacity(double x) {
  if (x <= 0.0) return 0.0;
  return x * x * g(1.0 / std::expm1(x));
}

// Finds the root of a decreasing function f(t) - target on t > 0 by
// geometric bracketing from `seed` and log-space bisection.
template <typename F>
double solve_decreasing(F&& f, double target, double seed, const char* what) {
  double lo = seed;
  double hi = seed;
  double f_lo = f(lo);
  double f_hi = f_lo;
  for (int i = 0; f_lo < target; ++i) {
    hi = lo;
    f_hi = f_lo;
    lo /= 4.0;
    const double next = f(lo);
    if (next < f_lo || i > 2000 || !(lo > 0.0)) {
      throw Error(ErrorKind::Nonconvergence, std::string(what) + ": could not bracket from below");
    }
    f_lo = next;
  }
  for (int i = 0; f_hi > target; ++i) {
    lo = hi;
    f_lo = f_hi;
    hi *= 4.0;
    const double next = f(hi);
    if (next > f_hi || i > 2000 || !std::isfinite(hi)) {
      throw Error(ErrorKind::Nonconvergence, std::string(what) + ": could not bracket from above");
    }
    f_hi = next;
  }
  if (f_lo == target) return lo;
  if (f_hi == target) return hi;

  double mid = std::sqrt(lo * hi);
  for (int iter = 0; iter < 400; ++iter) {
    mid = std::sqrt(lo * hi);
    const double v = f(mid);
    if (std::abs(v - target) <= 1e-14 * target) return mid;
    (v > target ? lo : hi) = mid;
    if (hi - lo <= 4e-16 * hi) return mid;
  }
  throw Error(ErrorKind::Nonconvergence, std::string(what) + ": bisection did not converge");
}

}  // namespace

SpectralCoefficients SpectralCoefficients::from_setup(const OpticalSetup& setup) {
  const double x = setup.object_size() * setup.pupil_radius() /
                   (2.0 * kPi * constants::speed_of_light * setup.object_distance());
  SpectralCoefficients c;
  c.beta = kPi * x * x;
  c.alpha = kPi * kPi * x * x * x * x;
  return c;
}

// --- band ------------------------------------------------------------------

FrequencyBand::FrequencyBand(double lower, double width, double time_window)
    : lower_(lower), width_(width), time_window_(time_window) {
  require_positive(lower, "band lower edge");
  require_positive(time_window, "time window");
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "band width must be > 0");
}

bool FrequencyBand::is_finite() const noexcept { return std::isfinite(width_); }

std::vector<double> FrequencyBand::grid(std::size_t max_points) const {
  if (!is_finite()) throw Error(ErrorKind::InvalidArgument, "an infinite band has no finite grid");
  const double step = 2.0 * kPi / time_window_;
  // Edges are inclusive; allow for rounding in Omega T / 2 pi.
  const double j_lo = std::ceil(lower_ / step - 1e-9);
  const double j_hi = std::floor(upper() / step + 1e-9);
  if (j_hi < j_lo) return {};
  if (j_hi - j_lo + 1.0 > static_cast<double>(max_points)) {
    throw Error(ErrorKind::InvalidArgument, "band grid exceeds the point limit");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(j_hi - j_lo + 1.0));
  for (double j = j_lo; j <= j_hi; j += 1.0) out.push_back(j * step);
  return out;
}

std::string_view to_string(SpectralMode mode) noexcept {
  return mode == SpectralMode::Discrete ? "discrete" : "continuum";
}

double ratio_at_frequency(const OpticalSetup& setup, double omega) noexcept {
  return setup.object_size() * omega * setup.pupil_radius() /
         (2.0 * kPi * constants::speed_of_light * setup.object_distance());
}

// --- special integrals -----------------------------------------------------

double planck_power_integral(double a, double b) {
  if (!(a >= 0.0) || !(b >= a)) {
    throw Error(ErrorKind::InvalidArgument, "Planck integral needs 0 <= a <= b");
  }
  const double upper = truncate_upper(a, b);
  if (upper <= a) return 0.0;
  return integrate(bose_power, a, upper);
}

double planck_capacity_integral(double a, double b) {
  if (!(a >= 0.0) || !(b >= a)) {
    throw Error(ErrorKind::InvalidArgument, "Planck integral needs 0 <= a <= b");
  }
  const double upper = truncate_upper(a, b);
  if (upper <= a) return 0.0;
  return integrate(bose_capacity, a, upper);
}

double F_integral(double z) {
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw Error(ErrorKind::InvalidArgument, "F(z) needs finite z >= 0");
  }
  return planck_power_integral(z, kInf);
}

double G_integral(double z) {
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw Error(ErrorKind::InvalidArgument, "G(z) needs finite z >= 0");
  }
  return planck_capacity_integral(z, kInf);
}

// --- near-field multiplier ---------------------------------------------------

namespace {

double power_for_q(double beta, double lower, double width, double q) {
  const double upper = std::isfinite(width) ? q * (lower + width) : kInf;
  const double q2 = q * q;
  return beta * constants::hbar / (2.0 * kPi * q2 * q2) * planck_power_integral(q * lower, upper);
}

}  // namespace

double solve_q(const OpticalSetup& setup, double lower, double width, double power,
               double time_window) {
  require_positive(lower, "band lower edge");
  require_positive(time_window, "time window");
  require_positive(power, "power");
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "band width must be > 0");
  const double beta = SpectralCoefficients::from_setup(setup).beta;
  // Broadband asymptotics P ~ beta pi^3 hbar / (30 q^4) as the seed.
  const double seed = std::pow(beta * kPi * kPi * kPi * constants::hbar / (30.0 * power), 0.25);
  return solve_decreasing([&](double q) { return power_for_q(beta, lower, width, q); }, power,
                          seed, "solve_q");
}

// --- spectral capacities -----------------------------------------------------

namespace {

SpectralResult edges(const OpticalSetup& setup, const FrequencyBand& band, SpectralMode mode,
                     const RegimeThresholds& thresholds) {
  thresholds.validate();
  SpectralResult r;
  r.mode = mode;
  r.lower_edge = classify_ratio(ratio_at_frequency(setup, band.lower()), thresholds);
  r.upper_edge = classify_ratio(ratio_at_frequency(setup, band.upper()), thresholds);
  return r;
}

void fill_discrete(SpectralResult& r, const std::vector<double>& grid,
                   const std::vector<ParallelChannel>& channels, double power,
                   double time_window) {
  const CapacityResult c = waterfill_channels(channels, power);
  r.capacity = c.capacity;
  r.allocation.frequencies = grid;
  r.allocation.photons = c.allocation.photons;
  r.allocation.multiplier = c.allocation.multiplier;
  r.allocation.residual = c.allocation.residual;
  r.allocation.q = kLn2 * c.allocation.multiplier * constants::hbar / time_window;
}

std::vector<double> nonempty_grid(const FrequencyBand& band) {
  std::vector<double> grid = band.grid();
  if (grid.empty()) {
    throw Error(ErrorKind::InvalidArgument,
                "band holds no frequency of the 2 pi / T grid; widen it or lengthen T");
  }
  return grid;
}

}  // namespace

SpectralResult capacity_ff_spectral(const OpticalSetup& setup, const FrequencyBand& band,
                                    double power, SpectralMode mode,
                                    const RegimeThresholds& thresholds) {
  require_power(power);
  if (!band.is_finite()) {
    throw Error(ErrorKind::InvalidArgument, "far-field spectral capacity needs a finite band");
  }
  SpectralResult r = edges(setup, band, mode, thresholds);
  r.regime_violation = r.upper_edge.regime != Regime::FarField ||
                       r.lower_edge.regime != Regime::FarField;
  if (power == 0.0) {
    r.allocation.multiplier = kInf;
    return r;
  }

  const double alpha = SpectralCoefficients::from_setup(setup).alpha;
  const double t = band.time_window();

  if (mode == SpectralMode::Discrete) {
    const std::vector<double> grid = nonempty_grid(band);
    std::vector<ParallelChannel> channels(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double w2 = grid[j] * grid[j];
      channels[j] = {alpha * w2 * w2, 1.0, constants::hbar * grid[j] / t};
    }
    fill_discrete(r, grid, channels, power, t);
    r.allocation.q = 0.0;
    return r;
  }

  // Continuum: with kappa = ln(2) mu hbar / (alpha T), the occupation at
  // omega is 1 / (e^(kappa / omega^3) - 1).
  const double a = band.lower();
  const double b = band.upper();
  const auto occupation = [](double kappa, double w) { return 1.0 / std::expm1(kappa / (w * w * w)); };
  const auto power_at = [&](double kappa) {
    return constants::hbar / (2.0 * kPi * alpha) *
           integrate([&](double w) { return occupation(kappa, w) / (w * w * w); }, a, b);
  };
  const double a3 = a * a * a;
  const double seed = a3 * std::log1p(constants::hbar * band.width() / (2.0 * kPi * alpha * a3 * power));
  const double kappa = solve_decreasing(power_at, power, seed, "far-field multiplier");

  r.capacity = t / (2.0 * kPi) * integrate([&](double w) { return g(occupation(kappa, w)); }, a, b);
  r.allocation.multiplier = kappa * alpha * t / (kLn2 * constants::hbar);
  r.allocation.residual = std::abs(power_at(kappa) - power) / power;
  return r;
}

SpectralResult capacity_nf_spectral(const OpticalSetup& setup, const FrequencyBand& band,
                                    double power, SpectralMode mode,
                                    const RegimeThresholds& thresholds) {
  require_power(power);
  SpectralResult r = edges(setup, band, mode, thresholds);
  r.regime_violation = r.lower_edge.regime != Regime::NearField ||
                       r.upper_edge.regime != Regime::NearField;
  if (power == 0.0) {
    r.allocation.multiplier = kInf;
    r.allocation.q = kInf;
    return r;
  }

  const double beta = SpectralCoefficients::from_setup(setup).beta;
  const double t = band.time_window();

  if (mode == SpectralMode::Discrete) {
    const std::vector<double> grid = nonempty_grid(band);
    std::vector<ParallelChannel> channels(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      channels[j] = {1.0, beta * grid[j] * grid[j], constants::hbar * grid[j] / t};
    }
    fill_discrete(r, grid, channels, power, t);
    return r;
  }

  const double q = solve_q(setup, band.lower(), band.width(), power, t);
  const double upper = band.is_finite() ? q * band.upper() : kInf;
  r.capacity = beta * t / (2.0 * kPi * q * q * q) * planck_capacity_integral(q * band.lower(), upper);
  r.allocation.q = q;
  r.allocation.multiplier = q * t / (kLn2 * constants::hbar);
  r.allocation.residual =
      std::abs(power_for_q(beta, band.lower(), band.width(), q) - power) / power;
  return r;
}

// --- closed forms ------------------------------------------------------------

namespace {

void check_closed_form_args(double lower, double width, double power, double time_window) {
  require_positive(lower, "band lower edge");
  require_positive(width, "band width");
  require_positive(time_window, "time window");
  require_power(power);
}

}  // namespace

double narrowband_ff(const OpticalSetup& setup, double lower, double width, double power,
                     double time_window) {
  check_closed_form_args(lower, width, power, time_window);
  const double alpha = SpectralCoefficients::from_setup(setup).alpha;
  const double l3 = lower * lower * lower;
  return time_window * width / (2.0 * kPi) *
         g(2.0 * kPi * power * alpha * l3 / (constants::hbar * width));
}

double narrowband_nf(const OpticalSetup& setup, double lower, double width, double power,
                     double time_window) {
  check_closed_form_args(lower, width, power, time_window);
  const double beta = SpectralCoefficients::from_setup(setup).beta;
  const double l2 = lower * lower;
  return beta / (2.0 * kPi) * time_window * l2 * width *
         g(2.0 * kPi * power / (beta * constants::hbar * l2 * lower * width));
}

double narrowband_nf_single_frequency(const OpticalSetup& setup, double lower, double width,
                                      double power, double time_window) {
  check_closed_form_args(lower, width, power, time_window);
  const double xr = 2.0 * kPi * constants::speed_of_light * setup.object_distance() /
                    (lower * setup.pupil_radius());
  const double l = setup.object_size();
  const double frequencies = width * time_window / (2.0 * kPi);
  const double nbar = power * time_window / (frequencies * constants::hbar * lower);
  const double modes = kPi * l * l / (xr * xr);
  return frequencies * modes * g(nbar / modes);
}

BroadbandEstimate capacity_nf_broadband(const OpticalSetup& setup, double lower, double power,
                                        double time_window,
                                        const BroadbandThresholds& thresholds) {
  require_positive(lower, "band lower edge");
  require_positive(time_window, "time window");
  require_power(power);
  if (!(thresholds.semiclassical_min > 0.0) || !(thresholds.q_lower_max > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "broadband thresholds must be > 0");
  }
  BroadbandEstimate e;
  e.semiclassical = power / (constants::hbar * lower * lower);
  e.semiclassical_ok = e.semiclassical >= thresholds.semiclassical_min;
  if (power == 0.0) {
    e.q = kInf;
    e.q_lower = kInf;
    e.f_deviation = 1.0;
    e.q_lower_ok = false;
    return e;
  }

  const double beta = SpectralCoefficients::from_setup(setup).beta;
  e.capacity = beta * kPi * kPi * time_window / (3.0 * std::pow(15.0, 0.25)) *
               std::pow(2.0 * kPi * power / (beta * constants::hbar), 0.75) *
               std::numbers::log2e;
  e.q = solve_q(setup, lower, kInf, power, time_window);
  e.q_lower = e.q * lower;
  e.q_lower_ok = e.q_lower <= thresholds.q_lower_max;
  const double f0 = F_integral(0.0);
  e.f_deviation = std::abs(F_integral(e.q_lower) - f0) / f0;
  return e;
}

double capacity_nf_broadband_integral_form(const OpticalSetup& setup, double power,
                                           double time_window) {
  require_positive(time_window, "time window");
  require_power(power);
  if (power == 0.0) return 0.0;
  const double beta = SpectralCoefficients::from_setup(setup).beta;
  const double q0 = std::pow(beta * constants::hbar * F_integral(0.0) / (2.0 * kPi * power), 0.25);
  return beta * time_window * G_integral(0.0) / (2.0 * kPi * q0 * q0 * q0);
}

}  // namespace diffcap
