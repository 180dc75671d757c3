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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffcap/broadband.hpp"
#include "diffcap/capacity.hpp"
#include "diffcap/core.hpp"
#include "diffcap/format.hpp"
#include "diffcap/scenarios.hpp"
#include "diffcap/transfer.hpp"
#include "svg.hpp"

namespace diffcap::cli {

namespace {

using json = nlohmann::json;

constexpr const char* kToolVersion = "1.0.0";

struct StrictViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binds CLI11 options to plain fields and lets a JSON document fill the
// ones that were not given on the command line.
class Registry {
 public:
  explicit Registry(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* option(const std::string& name, T& var, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + name, var, help)->capture_default_str();
    bind(name, opt, var);
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + name, var, help);
    bind(name, opt, var);
    return opt;
  }

  bool knows(const std::string& key) const { return names_.count(key) != 0; }

  void apply(const json& config) const {
    for (const auto& f : apply_) f(config);
  }

  void echo(json& out) const {
    for (const auto& f : echo_) f(out);
  }

 private:
  template <typename T>
  void bind(const std::string& name, CLI::Option* opt, T& var) {
    names_.insert(name);
    apply_.push_back([name, opt, &var](const json& config) {
      if (opt->count() != 0) return;
      const auto it = config.find(name);
      if (it != config.end()) var = it->template get<T>();
    });
    echo_.push_back([name, &var](json& out) { out[name] = var; });
  }

  CLI::App* app_;
  std::set<std::string> names_;
  std::vector<std::function<void(const json&)>> apply_;
  std::vector<std::function<void(json&)>> echo_;
};

// --- settings ----------------------------------------------------------------

struct Global {
  std::string config_path;
  std::string output;
  std::string svg;
  bool strict = false;
  bool stamp = false;
  double far_threshold = 0.2;
  double near_threshold = 5.0;

  double wavelength = 5e-7;
  double object_distance = 1.0;
  double image_distance = 0.0;
  double focal_length = 0.0;
  double magnification = 1.0;
  double pupil_radius = 1e-2;
  double object_size = 1e-3;
  double ratio = 0.0;
};

struct TransferSettings {
  int dim = 1;
  int nmax = 0;
  double safety = 2.0;
  std::size_t quad_order = 0;
  std::size_t quad_min_order = 16;
  double quad_tol = 1e-8;
  std::string closure = "exact";
  std::string pupil = "auto";
  double aperture = 1.0;
  double aspect = 1.0;
};

struct CurveSettings {
  double nbar = 4.0;
  double ratio_min = 0.1;
  double ratio_max = 10.0;
  int points = 50;
  bool polarized = false;
};

struct CompareSettings {
  double nbar = 1.0;
  double nth = 0.0;
  std::vector<std::string> quantities;
};

struct BroadbandSettings {
  std::string regime = "near";
  std::string mode = "continuum";
  double power = 1e-6;
  double time_window = 1e-9;
  double omega_lower = 0.0;
  double omega_width = 0.0;
  bool infinite_band = false;
  double semiclassical_min = 100.0;
  double q_lower_max = 1.0;
};

void invalid(const std::string& message) { throw Error(ErrorKind::InvalidArgument, message); }

RegimeThresholds thresholds_of(const Global& g) {
  RegimeThresholds t{g.far_threshold, g.near_threshold};
  t.validate();
  return t;
}

// Precedence for the lens: image distance, then focal length, then
// magnification. A given ratio overrides the object size.
OpticalSetup resolve_setup(const Global& g) {
  OpticalSetup setup = [&] {
    if (g.image_distance > 0.0 && g.focal_length > 0.0) {
      return OpticalSetup::from_all(g.wavelength, g.object_distance, g.image_distance,
                                    g.focal_length, g.pupil_radius, g.object_size,
                                    g.image_distance / g.object_distance);
    }
    if (g.image_distance > 0.0) {
      return OpticalSetup::from_image_distance(g.wavelength, g.object_distance, g.image_distance,
                                               g.pupil_radius, g.object_size);
    }
    if (g.focal_length > 0.0) {
      return OpticalSetup::from_focal_length(g.wavelength, g.object_distance, g.focal_length,
                                             g.pupil_radius, g.object_size);
    }
    return OpticalSetup::from_magnification(g.wavelength, g.object_distance, g.magnification,
                                            g.pupil_radius, g.object_size);
  }();
  if (g.ratio < 0.0) invalid("--ratio must be > 0");
  if (g.ratio > 0.0) setup = setup.with_ratio(g.ratio);
  return setup;
}

json describe_setup(const OpticalSetup& s, const RegimeThresholds& t) {
  const RegimeReport r = classify_regime(s, t);
  return json{{"wavelength", s.wavelength()},
              {"object_distance", s.object_distance()},
              {"image_distance", s.image_distance()},
              {"focal_length", s.focal_length()},
              {"magnification", s.magnification()},
              {"pupil_radius", s.pupil_radius()},
              {"object_size", s.object_size()},
              {"rayleigh_length", rayleigh_length(s)},
              {"ratio", r.ratio},
              {"fresnel_number", fresnel_number(s)},
              {"regime", std::string(to_string(r.regime))}};
}

Pupil make_pupil(const TransferSettings& t, double radius) {
  if (!(t.aperture >= 0.0)) invalid("--aperture must be >= 0");
  if (!(t.aspect > 0.0)) invalid("--aspect must be > 0");
  const double extent = t.aperture * radius;
  std::string shape = t.pupil;
  if (shape == "auto") shape = t.dim == 1 ? "slit" : "circular";
  if (t.dim == 1 && shape != "slit") invalid("a 1D build needs --pupil slit");
  if (t.dim == 2 && shape == "slit") invalid("a 2D build needs a circular or rectangular pupil");
  if (shape == "slit") return Pupil::slit(extent);
  if (shape == "circular") return Pupil::circular(extent);
  if (shape == "rectangular") return Pupil::rectangular(extent, extent * t.aspect);
  invalid("--pupil must be auto, slit, circular or rectangular");
  return Pupil::slit(0.0);
}

QuadratureSpec quadrature_of(const TransferSettings& t) {
  QuadratureSpec q;
  q.order = t.quad_order;
  q.min_order = t.quad_min_order;
  q.tolerance = t.quad_tol;
  q.safety_factor = t.safety;
  if (t.closure == "exact") {
    q.closure = TailClosure::Exact;
  } else if (t.closure == "none") {
    q.closure = TailClosure::None;
  } else {
    invalid("--closure must be exact or none");
  }
  return q;
}

ModeGrid grid_for(const TransferSettings& t, const OpticalSetup& setup) {
  if (t.dim != 1 && t.dim != 2) invalid("--dim must be 1 or 2");
  if (t.nmax < 0) invalid("--nmax must be >= 0");
  if (t.nmax > 0) return ModeGrid(t.dim, t.nmax);
  return ModeGrid::for_ratio(t.dim, ratio(setup) * std::max(1.0, t.aperture), t.safety);
}

struct Build {
  TransferMatrix matrix;
  TransmissivitySpectrum spectrum;
};

Build build(const TransferSettings& t, const OpticalSetup& setup) {
  const Pupil pupil = make_pupil(t, setup.pupil_radius());
  const ModeGrid grid = grid_for(t, setup);
  TransferMatrix m = build_transfer_matrix(setup, pupil, grid, quadrature_of(t));
  TransmissivitySpectrum s = singular_values(m);
  return {std::move(m), std::move(s)};
}

// --- output ------------------------------------------------------------------

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoFailure("cannot open " + path + " for writing");
  f << content;
  if (!f) throw IoFailure("failed writing " + path);
}

struct Context {
  const Global& global;
  std::ostream& out;
  std::string command;
  json config;

  // Data to --output (or stdout). The sidecar <output>.meta.json records
  // the resolved configuration and run details.
  void emit(const std::string& data, const json& details) const {
    if (global.output.empty()) {
      out << data;
      return;
    }
    write_file(global.output, data);
    json meta{{"tool", "diffcap"},
              {"version", kToolVersion},
              {"command", command},
              {"config", config},
              {"details", details}};
    if (global.stamp) meta["generated_at"] = timestamp_utc();
    write_file(global.output + ".meta.json", meta.dump(2) + "\n");
  }

  void emit_svg(const PlotSpec& plot) const {
    if (!global.svg.empty()) write_file(global.svg, render_svg(plot));
  }
};

json number_or(double v, const char* fallback) {
  if (std::isfinite(v)) return v;
  return fallback;
}

json gated(const GatedValue& v) {
  if (!v.regime_ok) return "invalid";
  if (!v.value) return "undefined";
  return number_or(*v.value, "undefined");
}

json raw(const GatedValue& v) {
  if (!v.value) return "undefined";
  return number_or(*v.value, "undefined");
}

json regime_json(const RegimeReport& r) {
  return json{{"ratio", number_or(r.ratio, "undefined")},
              {"regime", std::string(to_string(r.regime))}};
}

// --- commands ------------------------------------------------------------------

void cmd_spectrum(const Context& ctx, const TransferSettings& t) {
  const OpticalSetup setup = resolve_setup(ctx.global);
  const Build b = build(t, setup);

  std::vector<std::vector<double>> rows;
  rows.reserve(b.spectrum.size());
  for (std::size_t i = 0; i < b.spectrum.size(); ++i) {
    rows.push_back({static_cast<double>(i), b.spectrum[i]});
  }

  const ModeGrid& grid = *b.matrix.grid();
  json details{{"setup", describe_setup(setup, thresholds_of(ctx.global))},
               {"dimension", grid.dimension()},
               {"n_max", grid.n_max()},
               {"modes", grid.size()},
               {"matrix_size", b.matrix.entries().rows()},
               {"closure_rank", b.matrix.closure_rank()},
               {"quadrature_order", b.matrix.quadrature_order()},
               {"quadrature_delta", b.matrix.quadrature_delta()},
               {"form", b.matrix.form() == MatrixForm::Gram ? "gram" : "amplitude"},
               {"plateau_count_0.5", plateau_count(b.spectrum, 0.5)}};
  ctx.emit(format_csv({"rank", "eta"}, rows), details);

  PlotSeries s{"eta", {}, {}, false};
  for (std::size_t i = 0; i < b.spectrum.size(); ++i) {
    s.x.push_back(static_cast<double>(i));
    s.y.push_back(b.spectrum[i]);
  }
  ctx.emit_svg({"Mode transmissivities", "rank", "eta", false, true, {s}});
}

void cmd_capacity_curve(const Context& ctx, const TransferSettings& t, const CurveSettings& c) {
  if (!(c.ratio_min > 0.0) || !(c.ratio_max > c.ratio_min)) {
    invalid("need 0 < --ratio-min < --ratio-max");
  }
  if (c.points < 2) invalid("--points must be >= 2");
  if (!(c.nbar > 0.0)) invalid("--nbar must be > 0");
  const RegimeThresholds th = thresholds_of(ctx.global);
  const OpticalSetup base = resolve_setup(ctx.global);
  const PhotonBudget budget = PhotonBudget::photons(c.nbar);

  std::vector<std::vector<double>> rows;
  json flags = json::array();
  std::vector<std::string> violations;
  PlotSeries num{"numerical", {}, {}, false};
  PlotSeries ff{"far-field closed form", {}, {}, true};
  PlotSeries nf{"near-field closed form", {}, {}, true};

  for (int i = 0; i < c.points; ++i) {
    const double r = i + 1 == c.points
                         ? c.ratio_max
                         : c.ratio_min * std::pow(c.ratio_max / c.ratio_min,
                                                  static_cast<double>(i) / (c.points - 1));
    const OpticalSetup setup = base.with_ratio(r);
    const Build b = build(t, setup);
    const double numeric = capacity_numerical(b.spectrum, budget).capacity;
    const CapacityResult cf = t.dim == 1 ? capacity_ff_1d(setup, c.nbar, th)
                                         : capacity_ff_2d(setup, c.nbar, c.polarized, th);
    const CapacityResult cn = t.dim == 1 ? capacity_nf_1d(setup, c.nbar, th)
                                         : capacity_nf_2d(setup, c.nbar, c.polarized, th);
    rows.push_back({r, numeric, cf.capacity, cn.capacity});
    flags.push_back(json{{"ratio", r},
                         {"regime", std::string(to_string(cf.regime->regime))},
                         {"ff_regime_violation", cf.regime_violation},
                         {"nf_regime_violation", cn.regime_violation}});
    if (cf.regime_violation || cn.regime_violation) violations.push_back(format_double(r));
    num.x.push_back(r);
    num.y.push_back(numeric);
    ff.x.push_back(r);
    ff.y.push_back(cf.capacity);
    nf.x.push_back(r);
    nf.y.push_back(cn.capacity);
  }

  if (ctx.global.strict && !violations.empty()) {
    std::string list;
    for (const auto& v : violations) list += (list.empty() ? "" : ", ") + v;
    throw StrictViolation("closed forms evaluated outside their regime at ratio " + list);
  }

  json details{{"setup", describe_setup(base, th)},
               {"points", flags},
               {"provenance",
                json{{"capacity_numeric", "numerical-SVD"},
                     {"capacity_ff", capacity_ff_1d(base, 0).provenance.tag()},
                     {"capacity_nf", capacity_nf_1d(base, 0).provenance.tag()}}}};
  if (t.dim == 2) {
    details["provenance"]["capacity_ff"] = capacity_ff_2d(base, 0, c.polarized).provenance.tag();
    details["provenance"]["capacity_nf"] = capacity_nf_2d(base, 0, c.polarized).provenance.tag();
  }
  ctx.emit(format_csv({"ratio", "capacity_numeric", "capacity_ff", "capacity_nf"}, rows), details);
  ctx.emit_svg({"Capacity vs L/x_R", "L/x_R", "bits", true, false, {num, ff, nf}});
}

void cmd_compare(const Context& ctx, const CompareSettings& c) {
  const RegimeThresholds th = thresholds_of(ctx.global);
  const OpticalSetup setup = resolve_setup(ctx.global);
  const ComparisonReport r = compare_scenarios(setup, c.nbar, c.nth, th);
  const ScenarioParams& p = r.params;

  const std::vector<std::pair<std::string, const GatedValue*>> named = {
      {"r1", &r.r1}, {"r2", &r.r2}, {"G1", &r.G1}, {"G2", &r.G2},
      {"G3", &r.G3}, {"eta_c", &r.pinhole.eta_c}, {"nu_c", &r.pinhole.nu_c}};
  std::vector<std::string> requested = c.quantities;
  if (requested.empty()) {
    for (const auto& [name, v] : named) requested.push_back(name);
  }
  for (const auto& q : requested) {
    const bool known = std::any_of(named.begin(), named.end(),
                                   [&](const auto& n) { return n.first == q; });
    if (!known) invalid("unknown quantity '" + q + "' (r1, r2, G1, G2, G3, eta_c, nu_c)");
  }

  json doc{{"config", ctx.config},
           {"eta_a", p.eta_a},
           {"eta_b", p.eta_b},
           {"nu_a", p.nu_a},
           {"nu_b", p.nu_b},
           {"r1", gated(r.r1)},
           {"r2", gated(r.r2)},
           {"G1", gated(r.G1)},
           {"G2", gated(r.G2)},
           {"G3", gated(r.G3)},
           {"gain_mode", c.nth > 0.0 ? "thermal" : "noiseless"},
           {"regime_flags",
            json{{"a", regime_json(p.regime_a)},
                 {"b", regime_json(p.regime_b)},
                 {"r1", r.r1.regime_ok},
                 {"r2", r.r2.regime_ok},
                 {"G1", r.G1.regime_ok},
                 {"G2", r.G2.regime_ok},
                 {"G3", r.G3.regime_ok}}},
           {"pinhole_bounds",
            json{{"eta_c", gated(r.pinhole.eta_c)},
                 {"nu_c", gated(r.pinhole.nu_c)},
                 {"eta_c_object_screen", p.eta_c_object_screen},
                 {"eta_c_screen_image", p.eta_c_screen_image}}},
           {"raw",
            json{{"r1", raw(r.r1)},
                 {"r2", raw(r.r2)},
                 {"G1", raw(r.G1)},
                 {"G2", raw(r.G2)},
                 {"G3", raw(r.G3)}}}};

  if (ctx.global.strict) {
    std::string bad;
    for (const auto& q : requested) {
      for (const auto& [name, v] : named) {
        if (name == q && !v->regime_ok) bad += (bad.empty() ? "" : ", ") + name;
      }
    }
    if (!bad.empty()) throw StrictViolation("outside regime: " + bad);
  }
  ctx.emit(doc.dump(2) + "\n", json{{"setup", describe_setup(setup, th)}});
}

void cmd_broadband(const Context& ctx, const BroadbandSettings& b) {
  const RegimeThresholds th = thresholds_of(ctx.global);
  const OpticalSetup setup = resolve_setup(ctx.global);
  if (b.regime != "near" && b.regime != "far") invalid("--regime must be near or far");
  if (b.mode != "continuum" && b.mode != "discrete") invalid("--mode must be continuum or discrete");
  if (!(b.omega_lower > 0.0)) invalid("--omega-lower must be > 0");
  if (!b.infinite_band && !(b.omega_width > 0.0)) {
    invalid("give --omega-width > 0 or --infinite-band");
  }
  const double width = b.infinite_band ? std::numeric_limits<double>::infinity() : b.omega_width;
  const FrequencyBand band(b.omega_lower, width, b.time_window);
  const SpectralMode mode = b.mode == "continuum" ? SpectralMode::Continuum : SpectralMode::Discrete;
  const bool near = b.regime == "near";

  const SpectralResult r = near ? capacity_nf_spectral(setup, band, b.power, mode, th)
                                : capacity_ff_spectral(setup, band, b.power, mode, th);

  json doc{{"config", ctx.config},
           {"capacity_bits", r.capacity},
           {"mode", std::string(to_string(mode))},
           {"regime", b.regime},
           {"q_or_mu", near ? number_or(r.allocation.q, "undefined")
                            : number_or(r.allocation.multiplier, "undefined")}};

  if (band.is_finite()) {
    doc["narrowband_closed_form"] =
        near ? narrowband_nf(setup, b.omega_lower, width, b.power, b.time_window)
             : narrowband_ff(setup, b.omega_lower, width, b.power, b.time_window);
  } else {
    doc["narrowband_closed_form"] = "undefined";
  }

  json diag{{"lower_edge", regime_json(r.lower_edge)},
            {"upper_edge", regime_json(r.upper_edge)},
            {"regime_violation", r.regime_violation},
            {"power_residual", r.allocation.residual},
            {"relative_width", number_or(width / b.omega_lower, "infinite")}};
  if (mode == SpectralMode::Discrete) diag["grid_points"] = r.allocation.frequencies.size();

  bool broadband_ok = true;
  if (near) {
    const BroadbandEstimate e = capacity_nf_broadband(
        setup, b.omega_lower, b.power, b.time_window, {b.semiclassical_min, b.q_lower_max});
    doc["broadband_closed_form"] = e.capacity;
    diag["broadband"] = json{{"q", number_or(e.q, "undefined")},
                             {"q_omega", number_or(e.q_lower, "undefined")},
                             {"semiclassical_ratio", e.semiclassical},
                             {"semiclassical_ok", e.semiclassical_ok},
                             {"q_omega_ok", e.q_lower_ok},
                             {"F_relative_deviation", e.f_deviation},
                             {"integral_form", capacity_nf_broadband_integral_form(
                                                   setup, b.power, b.time_window)}};
    broadband_ok = e.regime_ok() || b.power == 0.0;
  }
  doc["diagnostics"] = diag;

  if (ctx.global.strict && b.power > 0.0) {
    if (r.regime_violation) throw StrictViolation("band leaves the " + b.regime + "-field regime");
    if (near && !band.is_finite() && !broadband_ok) {
      throw StrictViolation("broadband closed form outside its validity checks");
    }
  }
  ctx.emit(doc.dump(2) + "\n", json{{"setup", describe_setup(setup, th)}});
}

// --- wiring ------------------------------------------------------------------

void add_transfer_options(Registry& reg, TransferSettings& t) {
  reg.option("dim", t.dim, "Transverse dimension: 1 (slit) or 2");
  reg.option("nmax", t.nmax, "Mode cutoff per axis; 0 picks ceil(safety * ratio)");
  reg.option("safety", t.safety, "Cutoff safety factor kappa (>= 2)");
  reg.option("quad-order", t.quad_order, "Gauss-Legendre nodes per pupil axis; 0 = automatic");
  reg.option("quad-min-order", t.quad_min_order, "Smallest accepted quadrature order");
  reg.option("quad-tol", t.quad_tol, "Entry tolerance for the order-doubling check");
  reg.option("closure", t.closure, "Tail closure: exact or none");
  reg.option("pupil", t.pupil, "auto, slit, circular or rectangular");
  reg.option("aperture", t.aperture, "Pupil half-extent in units of the pupil radius; 0 closes it");
  reg.option("aspect", t.aspect, "y/x extent ratio of a rectangular pupil");
}

json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) invalid("cannot read config file " + path);
  json doc = json::parse(f);
  if (!doc.is_object()) invalid("config file must hold a JSON object");
  return doc;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical capacities of diffraction-limited optical links", "diffcap"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1, 1);
  app.fallthrough();

  Global global;
  Registry root(&app);
  app.add_option("--config", global.config_path,
                 "JSON config file; flags override its values")
      ->envname(kConfigEnvVar);
  root.option("output", global.output, "Output file; stdout when empty");
  root.option("svg", global.svg, "Also render an SVG plot to this path");
  root.flag("strict", global.strict, "Fail with exit code 4 when a closed form leaves its regime");
  root.flag("stamp", global.stamp, "Record a UTC timestamp in the metadata sidecar");
  root.option("far-threshold", global.far_threshold, "Far field when L/x_R <= this");
  root.option("near-threshold", global.near_threshold, "Near field when L/x_R >= this");
  root.option("wavelength", global.wavelength, "Wavelength lambda [m]");
  root.option("object-distance", global.object_distance, "Object distance D_o [m]");
  root.option("image-distance", global.image_distance, "Image distance D_i [m]; 0 = derive");
  root.option("focal-length", global.focal_length, "Focal length f [m]; 0 = derive");
  root.option("magnification", global.magnification, "Magnification M (if D_i and f unset)");
  root.option("pupil-radius", global.pupil_radius, "Pupil scale R [m]");
  root.option("object-size", global.object_size, "Object size L [m]");
  root.option("ratio", global.ratio, "Set L = ratio * x_R; 0 keeps --object-size");

  TransferSettings transfer;
  CurveSettings curve;
  CompareSettings compare;
  BroadbandSettings broadband;

  CLI::App* spectrum = app.add_subcommand("spectrum", "Mode transmissivities as CSV rank,eta");
  Registry spectrum_reg(spectrum);
  add_transfer_options(spectrum_reg, transfer);

  CLI::App* curve_cmd = app.add_subcommand(
      "capacity-curve", "Numerical and closed-form capacities over a log-spaced ratio sweep");
  Registry curve_reg(curve_cmd);
  add_transfer_options(curve_reg, transfer);
  curve_reg.option("nbar", curve.nbar, "Mean photon number per use");
  curve_reg.option("ratio-min", curve.ratio_min, "First L/x_R of the sweep");
  curve_reg.option("ratio-max", curve.ratio_max, "Last L/x_R of the sweep");
  curve_reg.option("points", curve.points, "Number of sweep points");
  curve_reg.flag("polarized", curve.polarized, "Polarization-doubled 2D closed forms");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Refocusing vs free-space vs pinhole comparison as JSON");
  Registry compare_reg(compare_cmd);
  compare_reg.option("nbar", compare.nbar, "Mean photon number");
  compare_reg.option("nth", compare.nth, "Thermal photons per mode; > 0 selects thermal gains");
  compare_reg.option("quantities", compare.quantities,
                     "Quantities checked by --strict (default: all)");

  CLI::App* broadband_cmd =
      app.add_subcommand("broadband", "Spectral capacity under a power constraint as JSON");
  Registry broadband_reg(broadband_cmd);
  broadband_reg.option("regime", broadband.regime, "near or far");
  broadband_reg.option("mode", broadband.mode, "continuum or discrete");
  broadband_reg.option("power", broadband.power, "Mean power P [W]");
  broadband_reg.option("time-window", broadband.time_window, "Time window T [s]");
  broadband_reg.option("omega-lower", broadband.omega_lower, "Band lower edge Omega [rad/s]");
  broadband_reg.option("omega-width", broadband.omega_width, "Band width dOmega [rad/s]");
  broadband_reg.flag("infinite-band", broadband.infinite_band, "Let the band extend to infinity");
  broadband_reg.option("semiclassical-min", broadband.semiclassical_min,
                       "Smallest P / (hbar Omega^2) accepted by the broadband form");
  broadband_reg.option("q-lower-max", broadband.q_lower_max,
                       "Largest q Omega accepted by the broadband form");

  try {
    app.parse(argc, argv);

    const std::vector<std::pair<CLI::App*, Registry*>> commands = {
        {spectrum, &spectrum_reg},
        {curve_cmd, &curve_reg},
        {compare_cmd, &compare_reg},
        {broadband_cmd, &broadband_reg}};
    CLI::App* active = app.get_subcommands().front();
    Registry* active_reg = nullptr;
    for (const auto& [cmd, reg] : commands) {
      if (cmd == active) active_reg = reg;
    }

    json config_file = json::object();
    if (!global.config_path.empty()) config_file = load_config(global.config_path);
    for (const auto& [key, value] : config_file.items()) {
      const bool known = root.knows(key) || std::any_of(commands.begin(), commands.end(),
                                                        [&](const auto& c) {
                                                          return c.second->knows(key);
                                                        });
      if (!known) invalid("unknown config key '" + key + "'");
    }
    root.apply(config_file);
    active_reg->apply(config_file);

    Context ctx{global, out, active->get_name(), json::object()};
    root.echo(ctx.config);
    active_reg->echo(ctx.config);

    if (active == spectrum) cmd_spectrum(ctx, transfer);
    if (active == curve_cmd) cmd_capacity_curve(ctx, transfer, curve);
    if (active == compare_cmd) cmd_compare(ctx, compare);
    if (active == broadband_cmd) cmd_broadband(ctx, broadband);
    return kExitOk;
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  } catch (const json::exception& e) {
    err << "diffcap: config error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const StrictViolation& e) {
    err << "diffcap: strict mode: " << e.what() << "\n";
    return kExitStrict;
  } catch (const Error& e) {
    err << "diffcap: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.is_numerical() ? kExitNumerical : kExitInvalid;
  } catch (const IoFailure& e) {
    err << "diffcap: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "diffcap: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace diffcap::cli
