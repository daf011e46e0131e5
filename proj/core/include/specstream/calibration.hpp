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

#include "specstream/indicators.hpp"
#include "specstream/laws.hpp"

namespace specstream {

/// Null ensemble used to calibrate envelope constants. `window` runs real
/// Gaussian measurement windows through the data transform chain (the
/// operational case); `unitary` uses the complex reference ensembles.
enum class CalibrationEnsemble { window, unitary };

/// Monte Carlo calibration of the envelope constants for (law, N, T):
/// c_density and c_ks are set just above the largest null-ensemble deviation
/// so the false-anomaly rate stays at or below 1%.
ConvergenceEnvelope calibrate_spectrum(LawKind law, long n, long t, int trials,
                                       std::uint64_t seed,
                                       CalibrationEnsemble ensemble = CalibrationEnsemble::window,
                                       int threads = 0);

struct SpectrumCalibration {
  LawKind law = LawKind::marchenko_pastur;
  long n = 0;
  long t = 0;
  double c_density = 0.0;
  double c_ks = 0.0;
  double epsilon = 1.0;
  int trials = 0;
  std::uint64_t seed = 0;

  ConvergenceEnvelope envelope() const;
};

/// JSON-backed store of spectrum calibrations (keyed by law, N, T) and
/// indicator references (keyed by indicator, N, T, L).
class CalibrationStore {
 public:
  CalibrationStore() = default;

  static CalibrationStore load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

  std::optional<SpectrumCalibration> find_spectrum(LawKind law, long n, long t) const;
  void put_spectrum(const SpectrumCalibration& cal);

  std::optional<IndicatorReference> find_reference(const std::string& indicator, long n,
                                                   long t, int chain_length) const;
  void put_reference(const IndicatorReference& ref);

  std::string to_json() const;
  static CalibrationStore from_json(const std::string& text);

 private:
  std::vector<SpectrumCalibration> spectra_;
  std::vector<IndicatorReference> references_;
};

}  // namespace specstream
