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
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "specstream/laws.hpp"
#include "specstream/types.hpp"

namespace specstream {

/// Scalar test function phi applied eigenvalue-wise in a linear eigenvalue
/// statistic. Built-in family: power-k, log-det (ln x, clamped below at
/// 1e-12), likelihood-ratio (x - ln x - 1, same clamp), and table-driven
/// piecewise-linear functions.
class TestFunction {
 public:
  static TestFunction power(int k);
  static TestFunction log_det();
  static TestFunction likelihood_ratio();
  static TestFunction from_table(std::string name,
                                 std::vector<std::pair<double, double>> points);
  static TestFunction linear_combination(double alpha, const TestFunction& f,
                                         double beta, const TestFunction& g);
  /// Lookup by name: power2/power3/power4, logdet, lrf.
  static TestFunction by_name(const std::string& name);

  const std::string& name() const { return name_; }
  double operator()(double x) const { return fn_(x); }

 private:
  TestFunction(std::string name, std::function<double(double)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}

  std::string name_;
  std::function<double(double)> fn_;
};

/// Calibrated location/scale of an indicator under the null ensemble, used to
/// normalize observed values and set detection thresholds.
struct IndicatorReference {
  std::string indicator;
  LawKind law = LawKind::marchenko_pastur;
  long n = 0;
  long t = 0;
  int chain_length = 1;
  double mean = 0.0;
  double variance = 0.0;
  enum class Source { quadrature, monte_carlo } source = Source::monte_carlo;
  int trials = 0;
  std::uint64_t seed = 0;

  double sd() const;
};

/// Linear eigenvalue statistic tau = sum_i phi(lambda_i) over a real-spectrum
/// sample. Throws DomainError if phi evaluates non-finite on any eigenvalue.
double les(const SpectralSample& s, const TestFunction& phi);

/// Mean spectral radius of a ring sample: sum_i |lambda_i| / N.
double msr(const SpectralSample& s);

/// N * integral of phi against the law density, by adaptive quadrature with
/// 1e-8 relative tolerance. Throws DomainError when phi is singular inside
/// the support (log-det at c = 1).
double theoretical_mean(const TestFunction& phi, const LawSpec& law, long n);

/// mu0 = tau / reference mean. Throws DegenerateReference when the mean
/// vanishes.
double normalized_indicator(double tau, const IndicatorReference& ref);

/// Number of eigenvalues outside the law support inflated by `margin`
/// (ring: fractional radius margin; real laws: margin * support width).
int outlier_count(const SpectralSample& s, const LawSpec& law, double margin);

/// Named indicator evaluated on a spectral sample: either the MSR over the
/// ring transform or an LES over the covariance transform.
class Indicator {
 public:
  static Indicator mean_spectral_radius();
  static Indicator linear_statistic(TestFunction phi);
  static Indicator by_name(const std::string& name);

  bool uses_ring() const { return is_msr_; }
  const std::string& name() const { return name_; }
  double evaluate(const SpectralSample& s) const;

 private:
  Indicator(bool is_msr, std::string name, std::vector<TestFunction> phi);

  bool is_msr_;
  std::string name_;
  std::vector<TestFunction> phi_;  // empty for MSR
};

/// Monte Carlo reference for an indicator on the N x T null ensemble
/// (i.i.d. Gaussian windows through the full transform chain). Requires
/// trials >= 100; reproducible from the seed.
IndicatorReference calibrate_reference(const Indicator& indicator, long n, long t,
                                       int chain_length, int trials, std::uint64_t seed,
                                       int threads = 0);

}  // namespace specstream
