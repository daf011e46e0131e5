// Copyright 2026 The specstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "specstream/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "specstream/errors.hpp"
#include "specstream/kde.hpp"

namespace specstream {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Frame {
  double width, height, margin;
  double x_lo, x_hi, y_lo, y_hi;

  double px(double x) const {
    return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin);
  }
  double py(double y) const {
    return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
  }
};

std::string svg_open(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" +
         num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string frame_box(const Frame& f) {
  return "<rect x=\"" + num(f.margin) + "\" y=\"" + num(f.margin) + "\" width=\"" +
         num(f.width - 2 * f.margin) + "\" height=\"" + num(f.height - 2 * f.margin) +
         "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
}

std::string polyline(const Frame& f, const std::vector<std::pair<double, double>>& pts,
                     const std::string& color, double width, const std::string& dash = "") {
  if (pts.empty()) return "";
  std::string out = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                    num(width) + "\"";
  if (!dash.empty()) out += " stroke-dasharray=\"" + dash + "\"";
  out += " points=\"";
  for (const auto& [x, y] : pts) out += num(f.px(x)) + "," + num(f.py(y)) + " ";
  out += "\"/>\n";
  return out;
}

std::string text_label(double x, double y, const std::string& s) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">" + s + "</text>\n";
}

}  // namespace

std::string emit_ring_plot(const SpectralSample& s, const LawSpec& law) {
  if (s.eigenvalues.empty()) throw DomainError("emit_ring_plot: empty sample");
  if (law.kind != LawKind::ring) throw DomainError("emit_ring_plot: needs a ring law");
  if (s.kind != SampleKind::ring) throw DomainError("emit_ring_plot: needs a ring sample");

  const Frame f{480, 480, 40, -1.6, 1.6, -1.6, 1.6};
  std::string out = svg_open(f.width, f.height);
  out += frame_box(f);

  const double unit = f.px(1.0) - f.px(0.0);
  auto circle = [&](double r, const std::string& color) {
    return "<circle cx=\"" + num(f.px(0)) + "\" cy=\"" + num(f.py(0)) + "\" r=\"" +
           num(r * unit) + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.2\" stroke-dasharray=\"4,3\"/>\n";
  };
  out += circle(1.0, "#c33");
  out += circle(law.support_lower(), "#c33");

  for (const auto& z : s.eigenvalues) {
    out += "<circle cx=\"" + num(f.px(z.real())) + "\" cy=\"" + num(f.py(z.imag())) +
           "\" r=\"2\" fill=\"#1769aa\"/>\n";
  }
  out += text_label(f.margin, f.margin - 10.0, "eigenvalues, N=" + std::to_string(s.n));
  out += "</svg>\n";
  return out;
}

std::string emit_density_plot(const SpectralSample& s, const LawSpec& law,
                              const ConvergenceEnvelope& env) {
  if (s.eigenvalues.empty()) throw DomainError("emit_density_plot: empty sample");
  if (s.kind == SampleKind::ring) {
    throw DomainError("emit_density_plot: needs a real spectrum");
  }
  const std::vector<double> evals = s.real_parts();
  const KernelDensity kde(evals);

  const double a = law.support_lower();
  const double b = law.support_upper();
  const double pad = 0.1 * (b - a);
  const auto [ilo, ihi] = env.interior_interval();

  constexpr int kPoints = 256;
  std::vector<std::pair<double, double>> kde_pts, law_pts, lo_pts, hi_pts;
  double y_max = 0.0;
  for (int i = 0; i <= kPoints; ++i) {
    const double x = (a - pad) + (b - a + 2 * pad) * i / kPoints;
    const double fk = kde(x);
    const double gl = law_density(law, x);
    kde_pts.push_back({x, fk});
    law_pts.push_back({x, gl});
    y_max = std::max({y_max, fk, gl});
    if (x >= ilo && x <= ihi) {
      const auto [lo, hi] = density_envelope(env, x);
      lo_pts.push_back({x, std::max(lo, 0.0)});
      hi_pts.push_back({x, hi});
      y_max = std::max(y_max, hi);
    }
  }

  const Frame f{600, 400, 45, a - pad, b + pad, 0.0, y_max * 1.08 + 1e-12};
  std::string out = svg_open(f.width, f.height);
  out += frame_box(f);
  out += polyline(f, hi_pts, "#999", 1.0, "5,4");
  out += polyline(f, lo_pts, "#999", 1.0, "5,4");
  out += polyline(f, law_pts, "#c33", 1.5);
  out += polyline(f, kde_pts, "#1769aa", 1.5);
  out += text_label(f.margin, f.margin - 10.0,
                    law_name(law.kind) + " density vs estimate, N=" + std::to_string(s.n));
  out += "</svg>\n";
  return out;
}

std::string emit_series_plot(const IndicatorSeries& series, double band_k) {
  if (series.points.empty()) throw DomainError("emit_series_plot: empty series");

  const double mean = series.reference.mean;
  const double sd = series.reference.sd();
  double y_lo = mean - band_k * sd;
  double y_hi = mean + band_k * sd;
  double x_lo = static_cast<double>(series.points.front().t_end);
  double x_hi = static_cast<double>(series.points.back().t_end);
  for (const auto& p : series.points) {
    y_lo = std::min(y_lo, p.value);
    y_hi = std::max(y_hi, p.value);
  }
  const double y_pad = 0.05 * (y_hi - y_lo) + 1e-12;
  const Frame f{700, 300, 45, x_lo, std::max(x_hi, x_lo + 1.0), y_lo - y_pad, y_hi + y_pad};

  std::string out = svg_open(f.width, f.height);
  // Reference band and mean.
  const double band_top = f.py(mean + band_k * sd);
  const double band_bot = f.py(mean - band_k * sd);
  out += "<rect x=\"" + num(f.margin) + "\" y=\"" + num(band_top) + "\" width=\"" +
         num(f.width - 2 * f.margin) + "\" height=\"" + num(band_bot - band_top) +
         "\" fill=\"#e8f0e8\"/>\n";
  out += polyline(f, {{f.x_lo, mean}, {f.x_hi, mean}}, "#3a3", 1.0, "6,4");
  out += frame_box(f);

  std::vector<std::pair<double, double>> pts;
  pts.reserve(series.points.size());
  for (const auto& p : series.points) pts.push_back({static_cast<double>(p.t_end), p.value});
  out += polyline(f, pts, "#1769aa", 1.3);
  out += text_label(f.margin, f.margin - 10.0, series.indicator + " vs t_end");
  out += "</svg>\n";
  return out;
}

}  // namespace specstream
