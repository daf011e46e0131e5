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

#include <vector>

namespace specstream {

/// Gaussian-kernel density estimator. Bandwidth defaults to Silverman's rule
/// h = 0.9 * min(sd, iqr/1.349) * n^(-1/5).
class KernelDensity {
 public:
  explicit KernelDensity(std::vector<double> samples, double bandwidth = 0.0);

  double bandwidth() const { return bandwidth_; }
  double operator()(double x) const;

 private:
  std::vector<double> samples_;
  double bandwidth_ = 0.0;
};

}  // namespace specstream
