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

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "specstream/types.hpp"

namespace specstream {

enum class LawKind { ring, marchenko_pastur, semicircle };

std::string law_name(LawKind kind);
LawKind law_from_name(const std::string& name);

/// Identity and parameters of a reference spectral law.
///  - marchenko-pastur: aspect ratio c = N/T in (0,1], support [(1-sqrt c)^2,
///    (1+sqrt c)^2]
///  - semicircle: support [-2, 2], no parameters
///  - ring: annulus with inner radius (1-c)^(L/2) and outer radius 1
struct LawSpec {
  LawKind kind = LawKind::marchenko_pastur;
  double c = 0.0;
  int chain_length = 1;

  static LawSpec marchenko_pastur(double c);
  static LawSpec semicircle();
  static LawSpec ring(double c, int chain_length = 1);

  double support_lower() const;
  double support_upper() const;
};

// Closed-form densities and distribution functions.

/// Marchenko-Pastur density at x for aspect ratio c in (0,1].
double mp_density(double x, double c);
/// Marchenko-Pastur distribution function; exact endpoints, smooth quadrature
/// in between (trigonometric substitution removes the edge singularities).
double mp_cdf(double x, double c);

double semicircle_density(double x);
double semicircle_cdf(double x);

/// Density/CDF dispatch on a LawSpec; throws UnsupportedLaw for ring.
double law_density(const LawSpec& law, double x);
double law_cdf(const LawSpec& law, double x);

// Ensemble samplers.

/// Hermitian Gaussian-ensemble matrix scaled so the spectrum converges to the
/// semicircle on [-2, 2]: A = (X + Xᴴ)/sqrt(2N), X standard complex Gaussian.
ComplexMatrix sample_gue(long n, std::uint64_t seed);

/// Wishart-type covariance (1/T) X Xᴴ of a standard complex Gaussian N x T;
/// spectrum converges to Marchenko-Pastur with c = N/T. Requires N <= T.
CovarianceMatrix sample_lue(long n, long t, std::uint64_t seed);

/// Eigenvalues of the corresponding samplers, ready for distribution tests.
SpectralSample gue_spectrum(long n, std::uint64_t seed);
SpectralSample lue_spectrum(long n, long t, std::uint64_t seed);

/// Hermitian equivalent of a square standardized data window,
/// (X + Xᵀ)/sqrt(2N); used for semicircle tests on measured data.
SpectralSample wigner_spectrum(const StandardizedMatrix& x);

/// Empirical spectral distribution: F(x) = (1/N) #{lambda_i <= x}.
class EsdFunction {
 public:
  explicit EsdFunction(std::vector<double> eigenvalues);

  double operator()(double x) const;
  const std::vector<double>& points() const { return points_; }
  long size() const { return static_cast<long>(points_.size()); }

 private:
  std::vector<double> points_;  // sorted
};

/// sup |F - G| over all jump points of F (both limits) plus 10N interior
/// points of the law support. Throws UnsupportedLaw for ring laws.
double kolmogorov_distance(const EsdFunction& f, const LawSpec& law);

/// Finite-N confidence band around a reference density, valid on the interior
/// interval that excludes an N-dependent edge strip. Constants come from
/// Monte Carlo calibration.
struct ConvergenceEnvelope {
  LawSpec law;
  long n = 0;
  double c_density = 1.0;  // density-band constant C
  double c_ks = 1.0;       // distribution threshold: anomaly when KS > c_ks/N
  double epsilon = 1.0;    // edge-exclusion constant

  /// [lo, hi] on which the density bound is defined.
  std::pair<double, double> interior_interval() const;
};

/// (lower, upper) density bounds at x: g(x) -/+ C/(N*w(x)) where w is
/// (4 - x^2) for the semicircle and (x-a)(b-x) for Marchenko-Pastur.
/// Throws EdgeRegion outside the interior interval.
std::pair<double, double> density_envelope(const ConvergenceEnvelope& env, double x);

struct SpectrumVerdict {
  bool anomaly = false;
  double ks_distance = 0.0;
  double ks_threshold = 0.0;
  bool ks_exceeded = false;
  bool envelope_exited = false;
  double worst_x = 0.0;  // grid point with the largest scaled density deviation
  double max_scaled_deviation = 0.0;  // max |kde - g| * N * w(x) over the grid
};

/// Verdict combining the two checks: the kernel-density estimate must stay
/// inside the envelope on a 512-point interior grid, and the Kolmogorov
/// distance must stay below c_ks/N.
SpectrumVerdict spectrum_test(const SpectralSample& s, const LawSpec& law,
                              const ConvergenceEnvelope& env);

}  // namespace specstream
