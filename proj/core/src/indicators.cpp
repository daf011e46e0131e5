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

#include "specstream/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specstream/errors.hpp"
#include "specstream/parallel.hpp"
#include "specstream/pipeline.hpp"
#include "specstream/quadrature.hpp"
#include "specstream/rng.hpp"

namespace specstream {

namespace {

constexpr double kLogClamp = 1e-12;

double clamped_log(double x) { return std::log(std::max(x, kLogClamp)); }

MeasurementWindow gaussian_window(long n, long t, std::uint64_t seed) {
  GaussianStream g(seed);
  Matrix values(n, t);
  for (long j = 0; j < t; ++j)
    for (long i = 0; i < n; ++i) values(i, j) = g.next();
  return make_window(std::move(values));
}

}  // namespace

TestFunction TestFunction::power(int k) {
  if (k < 1) throw DomainError("power test function needs k >= 1");
  return {"power" + std::to_string(k), [k](double x) { return std::pow(x, k); }};
}

TestFunction TestFunction::log_det() {
  return {"logdet", [](double x) { return clamped_log(x); }};
}

TestFunction TestFunction::likelihood_ratio() {
  return {"lrf", [](double x) { return x - clamped_log(x) - 1.0; }};
}

TestFunction TestFunction::from_table(std::string name,
                                      std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw DomainError("table test function needs >= 2 points");
  std::sort(points.begin(), points.end());
  return {std::move(name), [pts = std::move(points)](double x) {
            if (x <= pts.front().first) return pts.front().second;
            if (x >= pts.back().first) return pts.back().second;
            const auto hi = std::lower_bound(
                pts.begin(), pts.end(), x,
                [](const auto& p, double v) { return p.first < v; });
            const auto lo = hi - 1;
            const double span = hi->first - lo->first;
            const double frac = span > 0.0 ? (x - lo->first) / span : 0.0;
            return lo->second * (1.0 - frac) + hi->second * frac;
          }};
}

TestFunction TestFunction::linear_combination(double alpha, const TestFunction& f,
                                              double beta, const TestFunction& g) {
  return {"combo(" + f.name() + "," + g.name() + ")",
          [alpha, f, beta, g](double x) { return alpha * f(x) + beta * g(x); }};
}

TestFunction TestFunction::by_name(const std::string& name) {
  if (name == "power2") return power(2);
  if (name == "power3") return power(3);
  if (name == "power4") return power(4);
  if (name == "logdet") return log_det();
  if (name == "lrf") return likelihood_ratio();
  throw DomainError("unknown test function: " + name);
}

double IndicatorReference::sd() const {
  if (!(variance > 0.0)) throw DegenerateReference("reference variance is not positive");
  return std::sqrt(variance);
}

double les(const SpectralSample& s, const TestFunction& phi) {
  if (s.kind == SampleKind::ring) {
    throw DomainError("les: needs a real spectrum (covariance or hermitian sample)");
  }
  double tau = 0.0;
  for (const auto& z : s.eigenvalues) {
    const double v = phi(z.real());
    if (!std::isfinite(v)) {
      throw DomainError("les: " + phi.name() + " not finite at eigenvalue " +
                        std::to_string(z.real()));
    }
    tau += v;
  }
  return tau;
}

double msr(const SpectralSample& s) {
  if (s.kind != SampleKind::ring) throw DomainError("msr: needs a ring sample");
  double acc = 0.0;
  for (const auto& z : s.eigenvalues) acc += std::abs(z);
  return acc / static_cast<double>(s.eigenvalues.size());
}

double theoretical_mean(const TestFunction& phi, const LawSpec& law, long n) {
  const bool log_like = phi.name() == "logdet" || phi.name() == "lrf";
  if (law.kind == LawKind::marchenko_pastur && log_like && law.support_lower() < kLogClamp) {
    throw DomainError("theoretical_mean: " + phi.name() +
                      " singular at the lower support edge (c = 1)");
  }

  double integral = 0.0;
  if (law.kind == LawKind::marchenko_pastur) {
    const double a = law.support_lower();
    const double b = law.support_upper();
    const double width = b - a;
    // Same trigonometric substitution as mp_cdf; smooth integrand.
    auto f = [&](double theta) {
      const double st = std::sin(theta);
      const double s2 = std::sin(2.0 * theta);
      const double x = a + width * st * st;
      if (x <= 0.0) return 0.0;
      return phi(x) * width * width * s2 * s2 / (4.0 * std::numbers::pi * law.c * x);
    };
    integral = adaptive_simpson(f, 0.0, std::numbers::pi / 2.0, 1e-11);
  } else if (law.kind == LawKind::semicircle) {
    // x = 2 sin(u): density times Jacobian is (2/pi) cos^2(u).
    auto f = [&](double u) {
      const double cu = std::cos(u);
      return phi(2.0 * std::sin(u)) * 2.0 * cu * cu / std::numbers::pi;
    };
    integral = adaptive_simpson(f, -std::numbers::pi / 2.0, std::numbers::pi / 2.0, 1e-11);
  } else {
    throw UnsupportedLaw("theoretical_mean: law has no closed-form density");
  }
  if (!std::isfinite(integral)) {
    throw DomainError("theoretical_mean: integral of " + phi.name() + " diverged");
  }
  return static_cast<double>(n) * integral;
}

double normalized_indicator(double tau, const IndicatorReference& ref) {
  if (ref.mean == 0.0) {
    throw DegenerateReference("normalized_indicator: reference mean is zero");
  }
  return tau / ref.mean;
}

int outlier_count(const SpectralSample& s, const LawSpec& law, double margin) {
  if (margin < 0.0) throw DomainError("outlier_count: margin must be >= 0");
  int count = 0;
  if (law.kind == LawKind::ring) {
    if (s.kind != SampleKind::ring) {
      throw DomainError("outlier_count: ring law needs a ring sample");
    }
    const double inner = law.support_lower() - margin;
    const double outer = 1.0 + margin;
    for (const auto& z : s.eigenvalues) {
      const double r = std::abs(z);
      if (r > outer || r < inner) ++count;
    }
    return count;
  }
  if (s.kind == SampleKind::ring) {
    throw DomainError("outlier_count: real-support law needs a real spectrum");
  }
  const double a = law.support_lower();
  const double b = law.support_upper();
  const double slack = margin * (b - a);
  for (const auto& z : s.eigenvalues) {
    if (z.real() < a - slack || z.real() > b + slack) ++count;
  }
  return count;
}

Indicator::Indicator(bool is_msr, std::string name, std::vector<TestFunction> phi)
    : is_msr_(is_msr), name_(std::move(name)), phi_(std::move(phi)) {}

Indicator Indicator::mean_spectral_radius() { return {true, "msr", {}}; }

Indicator Indicator::linear_statistic(TestFunction phi) {
  std::string name = phi.name();
  return {false, std::move(name), {std::move(phi)}};
}

Indicator Indicator::by_name(const std::string& name) {
  if (name == "msr") return mean_spectral_radius();
  return linear_statistic(TestFunction::by_name(name));
}

double Indicator::evaluate(const SpectralSample& s) const {
  return is_msr_ ? msr(s) : les(s, phi_.front());
}

IndicatorReference calibrate_reference(const Indicator& indicator, long n, long t,
                                       int chain_length, int trials, std::uint64_t seed,
                                       int threads) {
  if (trials < 100) throw DomainError("calibrate_reference: needs trials >= 100");
  if (n < 2 || t < n) throw ShapeError("calibrate_reference: needs 2 <= N <= T");

  std::vector<double> values(trials);
  parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t i) {
        const std::uint64_t trial_seed = mix_seed(seed, i);
        const MeasurementWindow w = gaussian_window(n, t, trial_seed);
        if (indicator.uses_ring()) {
          const RingMatrix z = ring_from_window(w, chain_length, mix_seed(trial_seed, 1));
          values[i] = indicator.evaluate(eigenvalues_general(z));
        } else {
          const CovarianceMatrix m = covariance_from_window(w, mix_seed(trial_seed, 1));
          values[i] = indicator.evaluate(eigenvalues_hermitian(m));
        }
      },
      threads);

  const double dt = static_cast<double>(trials);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / dt;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double variance = ss / (dt - 1.0);
  if (!(variance > 0.0)) {
    throw DegenerateReference("calibrate_reference: null ensemble has zero variance");
  }

  IndicatorReference ref;
  ref.indicator = indicator.name();
  ref.law = indicator.uses_ring() ? LawKind::ring : LawKind::marchenko_pastur;
  ref.n = n;
  ref.t = t;
  ref.chain_length = chain_length;
  ref.mean = mean;
  ref.variance = variance;
  ref.source = IndicatorReference::Source::monte_carlo;
  ref.trials = trials;
  ref.seed = seed;
  return ref;
}

}  // namespace specstream
