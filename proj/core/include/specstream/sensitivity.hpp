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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specstream/detection.hpp"
#include "specstream/types.hpp"

namespace specstream {

/// Candidate factor: N_f rows aligned with the basic matrix's time axis.
struct FactorMatrix {
  Matrix values;
  std::string factor_id;
};

struct FactorScore {
  std::string factor_id;
  double score = 0.0;  // sup-norm deviation from the random baseline curve
  int rank = 0;        // 1 = most relevant
};

struct SensitivityConfig {
  WindowConfig window;
  std::string indicator = "power2";  // LES used for the concatenated curves
  int baseline_seeds = 20;           // random-factor draws forming the baseline
  int reference_trials = 200;        // null trials for the concatenated reference
  std::uint64_t seed = 0;
  int threads = 0;
  /// Restrict delay scoring to windows overlapping [first, last]; when unset
  /// the scan uses events detected on the basic matrix, falling back to all
  /// windows.
  std::optional<std::pair<long, long>> event_range;
  double detect_k = 5.0;
};

/// Row-stacks the factor under the basic matrix. Factors much narrower than
/// the basic matrix are duplicated ceil(0.05 * N_b / N_f) times so they keep
/// roughly 5% weight. Requires equal sample counts.
MeasurementWindow concatenate(const MeasurementWindow& basic, const FactorMatrix& factor);

struct RankResult {
  std::vector<FactorScore> scores;  // descending score, ties by factor_id
  double baseline_mean = 0.0;       // spread of the random-factor scores
  double baseline_sd = 0.0;
};

/// Scores each factor by how far the normalized indicator curve of
/// [basic; factor] departs from the averaged [basic; random] baseline.
/// Factors are evaluated independently (in parallel) and must share N_f.
RankResult rank_factors(const MeasurementWindow& basic,
                        const std::vector<FactorMatrix>& factors,
                        const SensitivityConfig& cfg);

struct DelayScanResult {
  long estimated_delay = 0;
  std::vector<std::pair<long, double>> profile;  // (shift, score)
  bool low_confidence = false;
  double baseline_mean = 0.0;
  double baseline_sd = 0.0;
};

/// Scans time shifts s in [-max_shift, max_shift] of the factor against the
/// basic matrix; the score of each shift is the peak deviation of the
/// concatenated curve over the event windows. The best-scoring shift
/// estimates the factor's sampling delay; ties resolve toward smaller |s|.
DelayScanResult delay_scan(const MeasurementWindow& basic, const FactorMatrix& factor,
                           long max_shift, const SensitivityConfig& cfg);

/// Advances factor rows by `shift` samples (negative = retard), replicating
/// the edge value into the vacated range.
Matrix shift_rows(const Matrix& values, long shift);

}  // namespace specstream
