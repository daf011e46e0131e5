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

#include "specstream/io_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "specstream/errors.hpp"

namespace specstream {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // Trim surrounding whitespace.
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  if (cell.empty()) throw ParseError("blank cell", row, col);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ParseError("cannot parse '" + cell + "' as a number", row, col);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value '" + cell + "'", row, col);
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MeasurementWindow ingest_csv_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_line(line));
  }
  if (rows.size() < 2) throw ParseError(origin + ": needs a header row and data rows", 1, 1);

  const std::size_t width = rows.front().size();
  if (width < 3) throw ParseError(origin + ": needs at least 2 sample columns", 1, 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw NonRectangular(origin + ": row " + std::to_string(r + 1) + " has " +
                               std::to_string(rows[r].size()) + " cells, expected " +
                               std::to_string(width),
                           r + 1, 1);
    }
  }

  // Header cells after the id column are sample indices; tolerate labels by
  // falling back to t_start = 1.
  long t_start = 1;
  {
    const std::string& first = rows[0][1];
    long idx = 0;
    const auto [ptr, ec] = std::from_chars(first.data(), first.data() + first.size(), idx);
    if (ec == std::errc{} && ptr == first.data() + first.size()) t_start = idx;
  }

  const long n = static_cast<long>(rows.size()) - 1;
  const long t = static_cast<long>(width) - 1;
  Matrix values(n, t);
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const auto& cells = rows[static_cast<std::size_t>(i + 1)];
    if (cells[0].empty()) throw ParseError("blank node id", static_cast<std::size_t>(i + 2), 1);
    ids.push_back(cells[0]);
    for (long j = 0; j < t; ++j) {
      values(i, j) = parse_cell(cells[static_cast<std::size_t>(j + 1)],
                                static_cast<std::size_t>(i + 2),
                                static_cast<std::size_t>(j + 2));
    }
  }
  return make_window(std::move(values), std::move(ids), t_start);
}

MeasurementWindow ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_csv_text(buf.str(), path.filename().string());
}

std::string window_to_csv(const MeasurementWindow& w) {
  std::string out = "node";
  for (long j = 0; j < w.values.cols(); ++j) {
    out += ',';
    out += std::to_string(w.t_start + j);
  }
  out += '\n';
  for (long i = 0; i < w.values.rows(); ++i) {
    out += w.node_ids[static_cast<std::size_t>(i)];
    for (long j = 0; j < w.values.cols(); ++j) {
      out += ',';
      out += format_double(w.values(i, j));
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const MeasurementWindow& w, const std::filesystem::path& path) {
  write_text_file(path, window_to_csv(w));
}

std::string series_to_csv(const std::vector<IndicatorSeries>& series) {
  std::string out = "t_end,indicator,value,sigma_magnitude\n";
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      out += std::to_string(p.t_end);
      out += ',';
      out += s.indicator;
      out += ',';
      out += format_double(p.value);
      out += ',';
      out += format_double(s.sigma_magnitude(p.value));
      out += '\n';
    }
  }
  return out;
}

std::string scores_to_csv(const std::vector<FactorScore>& scores) {
  std::string out = "factor_id,score,rank\n";
  for (const auto& s : scores) {
    out += s.factor_id + ',' + format_double(s.score) + ',' + std::to_string(s.rank) + '\n';
  }
  return out;
}

std::string delay_profile_to_csv(const std::vector<std::pair<long, double>>& profile) {
  std::string out = "shift,score\n";
  for (const auto& [shift, score] : profile) {
    out += std::to_string(shift) + ',' + format_double(score) + '\n';
  }
  return out;
}

std::string events_to_json(const std::vector<AnomalyEvent>& events) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& e : events) {
    doc.push_back({{"indicator", e.indicator},
                   {"t_onset", e.t_onset},
                   {"t_peak", e.t_peak},
                   {"t_last", e.t_last},
                   {"direction", e.direction == AnomalyEvent::Direction::above ? "above" : "below"},
                   {"magnitude_sigma", e.magnitude}});
  }
  return doc.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace specstream
