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

#include "specstream/detection.hpp"

#include <cmath>
#include <utility>

#include "specstream/errors.hpp"
#include "specstream/parallel.hpp"
#include "specstream/pipeline.hpp"
#include "specstream/rng.hpp"

namespace specstream {

double IndicatorSeries::sigma_magnitude(double value) const {
  return (value - reference.mean) / reference.sd();
}

namespace {

MeasurementWindow select_nodes(const MeasurementWindow& stream,
                               const std::vector<long>& subset) {
  if (subset.empty()) return stream;
  Matrix values(static_cast<long>(subset.size()), stream.values.cols());
  std::vector<std::string> ids;
  ids.reserve(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const long r = subset[i];
    if (r < 0 || r >= stream.values.rows()) {
      throw ShapeError("node subset index " + std::to_string(r) + " out of range");
    }
    values.row(static_cast<long>(i)) = stream.values.row(r);
    ids.push_back(stream.node_ids[static_cast<std::size_t>(r)]);
  }
  MeasurementWindow out;
  out.values = std::move(values);
  out.node_ids = std::move(ids);
  out.t_start = stream.t_start;
  out.t_end = stream.t_end;
  return out;
}

}  // namespace

std::vector<MeasurementWindow> slide(const MeasurementWindow& stream,
                                     const WindowConfig& cfg) {
  if (cfg.stride < 1) throw DomainError("slide: stride must be >= 1");
  if (cfg.width < 2) throw DomainError("slide: width must be >= 2");
  const MeasurementWindow source = select_nodes(stream, cfg.node_subset);
  const long total = source.values.cols();
  if (total < cfg.width) {
    throw StreamTooShort("slide: stream has " + std::to_string(total) +
                         " samples, window needs " + std::to_string(cfg.width));
  }

  const long count = (total - cfg.width) / cfg.stride + 1;
  std::vector<MeasurementWindow> windows;
  windows.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) {
    const long offset = k * cfg.stride;
    MeasurementWindow w;
    w.values = source.values.middleCols(offset, cfg.width);
    w.node_ids = source.node_ids;
    w.t_start = source.t_start + offset;
    w.t_end = w.t_start + cfg.width - 1;
    windows.push_back(std::move(w));
  }
  return windows;
}

std::vector<IndicatorSeries> indicator_curve(const MeasurementWindow& stream,
                                             const std::vector<Indicator>& indicators,
                                             const std::vector<IndicatorReference>& references,
                                             const EngineConfig& cfg) {
  if (indicators.empty()) throw DomainError("indicator_curve: no indicators requested");
  if (indicators.size() != references.size()) {
    throw DomainError("indicator_curve: need one reference per indicator");
  }

  const std::vector<MeasurementWindow> windows = slide(stream, cfg.window);
  const std::size_t n_windows = windows.size();
  const std::size_t n_ind = indicators.size();

  bool any_ring = false;
  bool any_cov = false;
  for (const auto& ind : indicators) (ind.uses_ring() ? any_ring : any_cov) = true;

  // values[w][i]; NaN marks a failed window.
  std::vector<std::vector<double>> values(n_windows,
                                          std::vector<double>(n_ind, std::nan("")));
  std::vector<char> failed(n_windows, 0);

  parallel_for(
      n_windows,
      [&](std::size_t wi) {
        const MeasurementWindow& w = windows[wi];
        // Seed tied to t_end so results do not depend on scheduling.
        const std::uint64_t window_seed =
            mix_seed(cfg.seed, static_cast<std::uint64_t>(w.t_end));
        try {
          SpectralSample ring_sample;
          SpectralSample cov_sample;
          if (any_ring) {
            ring_sample =
                eigenvalues_general(ring_from_window(w, cfg.chain_length, window_seed));
          }
          if (any_cov) {
            cov_sample = eigenvalues_hermitian(covariance_from_window(w, window_seed));
          }
          for (std::size_t i = 0; i < n_ind; ++i) {
            values[wi][i] =
                indicators[i].evaluate(indicators[i].uses_ring() ? ring_sample : cov_sample);
          }
        } catch (const Error&) {
          failed[wi] = 1;
        }
      },
      cfg.threads);

  std::vector<IndicatorSeries> out(n_ind);
  for (std::size_t i = 0; i < n_ind; ++i) {
    out[i].indicator = indicators[i].name();
    out[i].reference = references[i];
    out[i].points.reserve(n_windows);
    for (std::size_t wi = 0; wi < n_windows; ++wi) {
      if (failed[wi] || !std::isfinite(values[wi][i])) {
        out[i].gaps.push_back(windows[wi].t_end);
      } else {
        out[i].points.push_back({windows[wi].t_end, values[wi][i]});
      }
    }
  }
  return out;
}

std::vector<AnomalyEvent> detect(const IndicatorSeries& series, double k) {
  if (k <= 0.0) throw DomainError("detect: threshold k must be > 0");
  const double sd = series.reference.sd();
  const double mean = series.reference.mean;

  std::vector<AnomalyEvent> events;
  bool open = false;
  AnomalyEvent current;
  double peak_abs = 0.0;

  auto close = [&]() {
    if (open) {
      events.push_back(current);
      open = false;
    }
  };

  for (const auto& p : series.points) {
    const double z = (p.value - mean) / sd;
    if (std::abs(z) > k) {
      if (!open) {
        open = true;
        current = AnomalyEvent{};
        current.indicator = series.indicator;
        current.t_onset = p.t_end;
        peak_abs = 0.0;
      }
      current.t_last = p.t_end;
      if (std::abs(z) > peak_abs) {
        peak_abs = std::abs(z);
        current.magnitude = std::abs(z);
        current.t_peak = p.t_end;
        current.direction =
            z > 0.0 ? AnomalyEvent::Direction::above : AnomalyEvent::Direction::below;
      }
    } else {
      close();
    }
  }
  close();
  return events;
}

}  // namespace specstream
