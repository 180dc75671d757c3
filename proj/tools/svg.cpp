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

#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "diffcap/format.hpp"

namespace diffcap::cli {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 36;
constexpr double kBottom = 50;

constexpr std::array<const char*, 4> kColors = {"#1f4e79", "#b03a2e", "#1e8449", "#7d3c98"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Rounded to 0.01 px so the text stays short and stable.
std::string px(double v) { return format_double(std::round(v * 100.0) / 100.0); }

struct Axis {
  bool log = false;
  double lo = 0;
  double hi = 1;

  bool accepts(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double map(double v) const { return log ? std::log10(v) : v; }

  void fit(const std::vector<double>& values) {
    double a = std::numeric_limits<double>::infinity();
    double b = -a;
    for (double v : values) {
      if (!accepts(v)) continue;
      a = std::min(a, map(v));
      b = std::max(b, map(v));
    }
    if (!std::isfinite(a)) {
      a = 0;
      b = 1;
    }
    if (b - a < 1e-12) {
      a -= 0.5;
      b += 0.5;
    }
    lo = a;
    hi = b;
  }

  double frac(double v) const { return (map(v) - lo) / (hi - lo); }
};

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  Axis ax{spec.log_x};
  Axis ay{spec.log_y};
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (ax.accepts(s.x[i]) && ay.accepts(s.y[i])) {
        xs.push_back(s.x[i]);
        ys.push_back(s.y[i]);
      }
    }
  }
  ax.fit(xs);
  ay.fit(ys);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto sx = [&](double v) { return kLeft + ax.frac(v) * pw; };
  const auto sy = [&](double v) { return kTop + (1.0 - ay.frac(v)) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" +
         px(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(pw) +
         "\" height=\"" + px(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + px(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(spec.title) + "</text>\n";
  out += "<text x=\"" + px(kLeft + pw / 2) + "\" y=\"" + px(kHeight - 12) +
         "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + px(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         px(kTop + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

  // Five ticks per axis, labelled in data units.
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    const double xv = ax.lo + t * (ax.hi - ax.lo);
    const double yv = ay.lo + t * (ay.hi - ay.lo);
    const double xl = ax.log ? std::pow(10.0, xv) : xv;
    const double yl = ay.log ? std::pow(10.0, yv) : yv;
    const double x = kLeft + t * pw;
    const double y = kTop + (1.0 - t) * ph;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", xl);
    out += "<text x=\"" + px(x) + "\" y=\"" + px(kTop + ph + 16) + "\" text-anchor=\"middle\">" +
           buf + "</text>\n";
    std::snprintf(buf, sizeof buf, "%.3g", yl);
    out += "<text x=\"" + px(kLeft - 6) + "\" y=\"" + px(y + 4) + "\" text-anchor=\"end\">" + buf +
           "</text>\n";
  }

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const char* color = kColors[k % kColors.size()];
    std::string points;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!ax.accepts(s.x[i]) || !ay.accepts(s.y[i])) continue;
      if (!points.empty()) points += ' ';
      points += px(sx(s.x[i])) + "," + px(sy(s.y[i]));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"" +
           (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" + points + "\"/>\n";
    const double ly = kTop + 16 + 16 * static_cast<double>(k);
    out += "<line x1=\"" + px(kLeft + 10) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(kLeft + 34) +
           "\" y2=\"" + px(ly - 4) + "\" stroke=\"" + color + "\"" +
           (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    out += "<text x=\"" + px(kLeft + 40) + "\" y=\"" + px(ly) + "\">" + escape(s.label) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace diffcap::cli
