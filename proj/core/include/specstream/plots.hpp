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

#include <string>

#include "specstream/detection.hpp"
#include "specstream/laws.hpp"
#include "specstream/types.hpp"

namespace specstream {

// All emitters return complete SVG documents with deterministic bytes for a
// given input.

/// Eigenvalue scatter on the complex plane with the reference annulus
/// (outer radius 1, inner radius (1-c)^(L/2)).
std::string emit_ring_plot(const SpectralSample& s, const LawSpec& law);

/// Kernel-density estimate of a real spectrum overlaid with the law density
/// and the convergence envelope on its interior interval.
std::string emit_density_plot(const SpectralSample& s, const LawSpec& law,
                              const ConvergenceEnvelope& env);

/// Indicator value against window end time, with the mean +/- k sigma band of
/// the calibrated reference.
std::string emit_series_plot(const IndicatorSeries& series, double band_k = 5.0);

}  // namespace specstream
