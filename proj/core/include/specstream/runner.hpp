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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "specstream/calibration.hpp"
#include "specstream/datagen.hpp"
#include "specstream/detection.hpp"
#include "specstream/laws.hpp"
#include "specstream/sensitivity.hpp"

namespace specstream {

/// One reproducible run: input source, window sweep, indicators, thresholds,
/// calibration handling, output location. The CLI builds this from a JSON
/// config document with flag overrides.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string input_csv;
  std::optional<Scenario> scenario;
  std::vector<std::string> nodes;  // node-id subset; empty = all
  long window_width = 240;
  long window_stride = 1;
  int chain_length = 1;
  std::vector<std::string> indicators = {"msr"};
  double threshold_k = 5.0;
  std::string calibration_file;
  int calibration_trials = 200;
  std::string out_dir = "out";
  bool plots = false;
  int threads = 0;
};

RunConfig run_config_from_json(const std::string& text);

/// Loads the configured input: the CSV when given, otherwise the generated
/// scenario.
MeasurementWindow load_input(const RunConfig& cfg);

struct AnalyzeOutput {
  std::vector<IndicatorSeries> series;
  std::vector<AnomalyEvent> events;
  std::vector<std::filesystem::path> files;
};

/// Sliding-window sweep with detection; writes indicators.csv, events.json
/// and optional SVG plots under out_dir.
AnalyzeOutput run_analyze(const RunConfig& cfg);

struct SpectrumTestOutput {
  SpectrumVerdict verdict;
  LawKind law = LawKind::marchenko_pastur;
  std::vector<std::filesystem::path> files;
};

/// Single-window goodness-of-fit verdict against the chosen law; writes
/// verdict.json and density.svg. For the semicircle law the trailing N x N
/// section of the window is used.
SpectrumTestOutput run_spectrum_test(const RunConfig& cfg, LawKind law);

struct GenOutput {
  std::filesystem::path voltages_csv;
  std::filesystem::path scenario_json;
  std::optional<std::filesystem::path> loads_csv;
};

/// Generates the configured (or standard) scenario; writes voltages.csv and
/// the resolved scenario.json, plus loads.csv when requested.
GenOutput run_gen(const RunConfig& cfg, bool emit_loads);

struct RankOptions {
  std::string factors_csv;              // each row becomes one single-row factor
  std::vector<std::string> self_nodes;  // rows of the basic matrix as factors
};

struct RankOutput {
  RankResult result;
  std::vector<std::filesystem::path> files;
};

RankOutput run_rank_factors(const RunConfig& cfg, const RankOptions& opts);

struct DelayOptions {
  std::string factor_csv;  // first row used as the factor
  std::string self_node;
  long max_shift = 40;
  std::optional<std::pair<long, long>> event_range;
};

struct DelayOutput {
  DelayScanResult result;
  std::vector<std::filesystem::path> files;
};

DelayOutput run_scan_delay(const RunConfig& cfg, const DelayOptions& opts);

struct CalibrateRequest {
  std::vector<LawKind> laws;
  std::vector<std::string> indicators;
  long n = 118;
  long t = 240;
  int chain_length = 1;
  int trials = 200;
};

/// Computes the requested spectrum/indicator calibrations and merges them
/// into the calibration file (cfg.calibration_file or
/// out_dir/calibration.json).
std::filesystem::path run_calibrate(const RunConfig& cfg, const CalibrateRequest& req);

}  // namespace specstream
