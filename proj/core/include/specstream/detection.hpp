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
#include <vector>

#include "specstream/indicators.hpp"
#include "specstream/types.hpp"

namespace specstream {

/// Moving-split-window configuration: fixed width, fixed stride, optional
/// node subset (row indices into the stream).
struct WindowConfig {
  std::vector<long> node_subset;  // empty = all rows
  long width = 240;
  long stride = 1;
};

struct SeriesPoint {
  long t_end = 0;
  double value = 0.0;
};

/// One indicator traced across the sliding windows. Windows whose evaluation
/// failed are recorded in `gaps` instead of aborting the sweep.
struct IndicatorSeries {
  std::string indicator;
  std::vector<SeriesPoint> points;  // strictly increasing t_end
  std::vector<long> gaps;
  IndicatorReference reference;

  double sigma_magnitude(double value) const;
};

struct AnomalyEvent {
  enum class Direction { above, below };

  std::string indicator;
  long t_onset = 0;  // t_end of the first breaching window
  long t_peak = 0;
  long t_last = 0;
  Direction direction = Direction::above;
  double magnitude = 0.0;  // peak |value - mean| / sd over the event
};

struct EngineConfig {
  WindowConfig window;
  int chain_length = 1;   // ring transform depth
  double threshold_k = 5.0;
  std::uint64_t seed = 0;
  int threads = 0;
};

/// Cuts the stream into overlapping windows covering
/// [t_end - width + 1, t_end]; count = floor((T - width)/stride) + 1.
/// Throws StreamTooShort when not even one window fits.
std::vector<MeasurementWindow> slide(const MeasurementWindow& stream,
                                     const WindowConfig& cfg);

/// Runs the full per-window chain (standardize, transform, eigenvalues,
/// indicator) for every indicator over every sliding window. Windows are
/// processed in parallel; the series comes back in t_end order. Per-window
/// failures turn into gaps.
std::vector<IndicatorSeries> indicator_curve(const MeasurementWindow& stream,
                                             const std::vector<Indicator>& indicators,
                                             const std::vector<IndicatorReference>& references,
                                             const EngineConfig& cfg);

/// Threshold detector: a window breaches when |value - mean| > k * sd; runs
/// of contiguous breaching windows merge into one event with the onset at the
/// first breach.
std::vector<AnomalyEvent> detect(const IndicatorSeries& series, double k);

}  // namespace specstream
