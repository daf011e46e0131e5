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

#include "specstream/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "specstream/errors.hpp"

namespace specstream {
namespace {

double sample_sd(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

double interquartile_range(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  auto quantile = [&](double q) {
    const double pos = q * (static_cast<double>(xs.size()) - 1.0);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= xs.size()) return xs.back();
    return xs[i] * (1.0 - frac) + xs[i + 1] * frac;
  };
  return quantile(0.75) - quantile(0.25);
}

}  // namespace

KernelDensity::KernelDensity(std::vector<double> samples, double bandwidth)
    : samples_(std::move(samples)), bandwidth_(bandwidth) {
  if (samples_.size() < 2) throw DomainError("kernel density needs at least 2 samples");
  if (bandwidth_ <= 0.0) {
    const double sd = sample_sd(samples_);
    const double iqr = interquartile_range(samples_);
    double spread = sd;
    if (iqr > 0.0) spread = std::min(spread, iqr / 1.349);
    if (spread <= 0.0) spread = std::max(std::abs(samples_.front()), 1e-12);
    bandwidth_ =
        0.9 * spread * std::pow(static_cast<double>(samples_.size()), -0.2);
  }
}

double KernelDensity::operator()(double x) const {
  const double inv_h = 1.0 / bandwidth_;
  const double norm =
      inv_h / (static_cast<double>(samples_.size()) * std::sqrt(2.0 * std::numbers::pi));
  double acc = 0.0;
  for (double s : samples_) {
    const double z = (x - s) * inv_h;
    acc += std::exp(-0.5 * z * z);
  }
  return acc * norm;
}

}  // namespace specstream
