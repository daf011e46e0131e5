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

#include "specstream/laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "specstream/errors.hpp"
#include "specstream/kde.hpp"
#include "specstream/pipeline.hpp"
#include "specstream/quadrature.hpp"
#include "specstream/rng.hpp"

namespace specstream {

namespace {

constexpr double kPi = std::numbers::pi;

void check_ratio(double c) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw DomainError("aspect ratio c must lie in (0, 1], got " + std::to_string(c));
  }
}

}  // namespace

std::string law_name(LawKind kind) {
  switch (kind) {
    case LawKind::ring: return "ring";
    case LawKind::marchenko_pastur: return "marchenko-pastur";
    case LawKind::semicircle: return "semicircle";
  }
  return "unknown";
}

LawKind law_from_name(const std::string& name) {
  if (name == "ring") return LawKind::ring;
  if (name == "marchenko-pastur" || name == "mp") return LawKind::marchenko_pastur;
  if (name == "semicircle" || name == "gue") return LawKind::semicircle;
  throw DomainError("unknown law name: " + name);
}

LawSpec LawSpec::marchenko_pastur(double c) {
  check_ratio(c);
  return {LawKind::marchenko_pastur, c, 1};
}

LawSpec LawSpec::semicircle() { return {LawKind::semicircle, 0.0, 1}; }

LawSpec LawSpec::ring(double c, int chain_length) {
  check_ratio(c);
  if (chain_length < 1) throw DomainError("ring law needs chain length >= 1");
  return {LawKind::ring, c, chain_length};
}

double LawSpec::support_lower() const {
  switch (kind) {
    case LawKind::marchenko_pastur: {
      const double s = 1.0 - std::sqrt(c);
      return s * s;
    }
    case LawKind::semicircle: return -2.0;
    case LawKind::ring: return std::pow(1.0 - c, chain_length / 2.0);
  }
  return 0.0;
}

double LawSpec::support_upper() const {
  switch (kind) {
    case LawKind::marchenko_pastur: {
      const double s = 1.0 + std::sqrt(c);
      return s * s;
    }
    case LawKind::semicircle: return 2.0;
    case LawKind::ring: return 1.0;
  }
  return 0.0;
}

double mp_density(double x, double c) {
  check_ratio(c);
  const double a = (1.0 - std::sqrt(c)) * (1.0 - std::sqrt(c));
  const double b = (1.0 + std::sqrt(c)) * (1.0 + std::sqrt(c));
  if (x <= a || x >= b) return 0.0;
  return std::sqrt((x - a) * (b - x)) / (2.0 * kPi * c * x);
}

double mp_cdf(double x, double c) {
  check_ratio(c);
  const double a = (1.0 - std::sqrt(c)) * (1.0 - std::sqrt(c));
  const double b = (1.0 + std::sqrt(c)) * (1.0 + std::sqrt(c));
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;

  // Substituting x = a + (b-a) sin^2(theta) turns the integrand into a smooth
  // function of theta, including the c = 1 case where a = 0.
  const double width = b - a;
  auto integrand = [=](double theta) {
    const double st = std::sin(theta);
    const double s2 = std::sin(2.0 * theta);
    const double xx = a + width * st * st;
    if (xx <= 0.0) return 0.0;
    return width * width * s2 * s2 / (4.0 * kPi * c * xx);
  };
  const double theta_x = std::asin(std::sqrt(std::clamp((x - a) / width, 0.0, 1.0)));
  const double mass = adaptive_simpson(integrand, 0.0, theta_x, 1e-12);
  return std::clamp(mass, 0.0, 1.0);
}

double semicircle_density(double x) {
  if (x <= -2.0 || x >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * kPi);
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(0.5 * x) / kPi;
}

double law_density(const LawSpec& law, double x) {
  switch (law.kind) {
    case LawKind::marchenko_pastur: return mp_density(x, law.c);
    case LawKind::semicircle: return semicircle_density(x);
    case LawKind::ring: break;
  }
  throw UnsupportedLaw("ring law has no scalar density on the real line");
}

double law_cdf(const LawSpec& law, double x) {
  switch (law.kind) {
    case LawKind::marchenko_pastur: return mp_cdf(x, law.c);
    case LawKind::semicircle: return semicircle_cdf(x);
    case LawKind::ring: break;
  }
  throw UnsupportedLaw("ring law has no scalar distribution function");
}

ComplexMatrix sample_gue(long n, std::uint64_t seed) {
  if (n < 2) throw ShapeError("sample_gue: N must be >= 2");
  GaussianStream g(seed);
  ComplexMatrix x(n, n);
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < n; ++i) x(i, j) = g.next_complex();
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  ComplexMatrix a = (x + x.adjoint()) * scale;
  return a;
}

CovarianceMatrix sample_lue(long n, long t, std::uint64_t seed) {
  if (n < 2) throw ShapeError("sample_lue: N must be >= 2");
  if (n > t) throw ShapeError("sample_lue: needs N <= T");
  GaussianStream g(seed);
  ComplexMatrix x(n, t);
  for (long j = 0; j < t; ++j)
    for (long i = 0; i < n; ++i) x(i, j) = g.next_complex();

  ComplexMatrix m = (x * x.adjoint()) / static_cast<double>(t);
  m = ((m + m.adjoint()) * 0.5).eval();

  CovarianceMatrix out;
  out.values = std::move(m);
  out.ratio = static_cast<double>(n) / static_cast<double>(t);
  out.source_t = t;
  return out;
}

SpectralSample gue_spectrum(long n, std::uint64_t seed) {
  return eigenvalues_hermitian(sample_gue(n, seed), n);
}

SpectralSample lue_spectrum(long n, long t, std::uint64_t seed) {
  return eigenvalues_hermitian(sample_lue(n, t, seed));
}

SpectralSample wigner_spectrum(const StandardizedMatrix& x) {
  const long n = x.values.rows();
  if (n != x.values.cols()) {
    throw ShapeError("wigner_spectrum: needs a square window (T == N)");
  }
  const Matrix sym =
      (x.values + x.values.transpose()) / std::sqrt(2.0 * static_cast<double>(n));
  return eigenvalues_hermitian(sym.cast<std::complex<double>>(), n);
}

EsdFunction::EsdFunction(std::vector<double> eigenvalues) : points_(std::move(eigenvalues)) {
  if (points_.empty()) throw DomainError("empty eigenvalue set");
  std::sort(points_.begin(), points_.end());
}

double EsdFunction::operator()(double x) const {
  const auto it = std::upper_bound(points_.begin(), points_.end(), x);
  return static_cast<double>(it - points_.begin()) / static_cast<double>(points_.size());
}

double kolmogorov_distance(const EsdFunction& f, const LawSpec& law) {
  if (law.kind == LawKind::ring) {
    throw UnsupportedLaw("kolmogorov_distance needs a law with a CDF");
  }
  const long n = f.size();
  const double dn = static_cast<double>(n);

  double dist = 0.0;
  // Both one-sided gaps at every jump of F.
  const auto& pts = f.points();
  for (long i = 0; i < n; ++i) {
    const double g = law_cdf(law, pts[i]);
    dist = std::max(dist, std::abs(static_cast<double>(i + 1) / dn - g));
    dist = std::max(dist, std::abs(static_cast<double>(i) / dn - g));
  }
  // Interior grid of the law support.
  const double lo = law.support_lower();
  const double hi = law.support_upper();
  const long grid = 10 * n;
  for (long j = 1; j <= grid; ++j) {
    const double x = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(grid + 1);
    dist = std::max(dist, std::abs(f(x) - law_cdf(law, x)));
  }
  return std::min(dist, 1.0);
}

std::pair<double, double> ConvergenceEnvelope::interior_interval() const {
  const double lo = law.support_lower();
  const double hi = law.support_upper();
  const double nn = static_cast<double>(n);
  double inset = 0.0;
  switch (law.kind) {
    case LawKind::semicircle: inset = epsilon * std::pow(nn, -1.0 / 3.0); break;
    case LawKind::marchenko_pastur: inset = epsilon * std::pow(nn, -2.0 / 3.0); break;
    case LawKind::ring:
      throw UnsupportedLaw("convergence envelope undefined for ring law");
  }
  return {lo + inset, hi - inset};
}

namespace {

double envelope_weight(const LawSpec& law, double x) {
  switch (law.kind) {
    case LawKind::semicircle: return 4.0 - x * x;
    case LawKind::marchenko_pastur: {
      const double a = law.support_lower();
      const double b = law.support_upper();
      return (x - a) * (b - x);
    }
    case LawKind::ring: break;
  }
  throw UnsupportedLaw("envelope weight undefined for ring law");
}

}  // namespace

std::pair<double, double> density_envelope(const ConvergenceEnvelope& env, double x) {
  const auto [lo, hi] = env.interior_interval();
  if (x < lo || x > hi) {
    throw EdgeRegion("density_envelope: x = " + std::to_string(x) +
                     " outside interior interval [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  }
  const double g = law_density(env.law, x);
  const double half_width =
      env.c_density / (static_cast<double>(env.n) * envelope_weight(env.law, x));
  return {g - half_width, g + half_width};
}

SpectrumVerdict spectrum_test(const SpectralSample& s, const LawSpec& law,
                              const ConvergenceEnvelope& env) {
  if (law.kind == LawKind::ring) {
    throw UnsupportedLaw("spectrum_test supports Marchenko-Pastur and semicircle laws");
  }
  if (s.kind == SampleKind::ring) {
    throw DomainError("spectrum_test: ring samples have no real spectrum to test");
  }
  if (env.n != s.n) {
    throw DomainError("spectrum_test: envelope calibrated for N = " + std::to_string(env.n) +
                      ", sample has N = " + std::to_string(s.n));
  }

  const std::vector<double> evals = s.real_parts();
  const EsdFunction esd(evals);

  SpectrumVerdict v;
  v.ks_distance = kolmogorov_distance(esd, law);
  v.ks_threshold = env.c_ks / static_cast<double>(env.n);
  v.ks_exceeded = v.ks_distance > v.ks_threshold;

  const KernelDensity kde(evals);
  const auto [lo, hi] = env.interior_interval();
  constexpr int kGridPoints = 512;
  const double nn = static_cast<double>(env.n);
  for (int i = 0; i < kGridPoints; ++i) {
    const double x = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / kGridPoints;
    const double fhat = kde(x);
    const double g = law_density(law, x);
    const double scaled = std::abs(fhat - g) * nn * envelope_weight(law, x);
    if (scaled > v.max_scaled_deviation) {
      v.max_scaled_deviation = scaled;
      v.worst_x = x;
    }
  }
  v.envelope_exited = v.max_scaled_deviation > env.c_density;
  v.anomaly = v.ks_exceeded || v.envelope_exited;
  return v;
}

}  // namespace specstream
