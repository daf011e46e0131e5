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

#include <filesystem>
#include <string>
#include <vector>

#include "specstream/detection.hpp"
#include "specstream/sensitivity.hpp"
#include "specstream/types.hpp"

namespace specstream {

/// Parses a measurement matrix: header row of sample indices, then one row
/// per node with the node id in the first column. Blank or non-numeric cells
/// raise ParseError with 1-based (row, column); ragged rows raise
/// NonRectangular.
MeasurementWindow ingest_csv(const std::filesystem::path& path);
MeasurementWindow ingest_csv_text(const std::string& text, const std::string& origin = "csv");

/// Inverse of ingest_csv; doubles are printed with enough digits to
/// round-trip exactly.
std::string window_to_csv(const MeasurementWindow& w);
void emit_csv(const MeasurementWindow& w, const std::filesystem::path& path);

/// Indicator series as "t_end,indicator,value,sigma_magnitude" rows.
std::string series_to_csv(const std::vector<IndicatorSeries>& series);

/// Factor scores as "factor_id,score,rank" rows.
std::string scores_to_csv(const std::vector<FactorScore>& scores);

/// Delay profile as "shift,score" rows.
std::string delay_profile_to_csv(const std::vector<std::pair<long, double>>& profile);

/// Anomaly events as a JSON array.
std::string events_to_json(const std::vector<AnomalyEvent>& events);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace specstream
