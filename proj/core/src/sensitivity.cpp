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

#include "specstream/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "specstream/errors.hpp"
#include "specstream/parallel.hpp"
#include "specstream/pipeline.hpp"
#include "specstream/rng.hpp"

namespace specstream {

namespace {

long duplication_factor(long n_basic, long n_factor) {
  const double weight = 0.05 * static_cast<double>(n_basic) / static_cast<double>(n_factor);
  return std::max(1L, static_cast<long>(std::ceil(weight)));
}

Matrix stack_duplicated(const Matrix& basic, const Matrix& factor, long dup) {
  const long n_b = basic.rows();
  const long n_f = factor.rows();
  Matrix out(n_b + dup * n_f, basic.cols());
  out.topRows(n_b) = basic;
  for (long k = 0; k < dup; ++k) out.middleRows(n_b + k * n_f, n_f) = factor;
  return out;
}

// Normalized indicator per window t_end, for the concatenated stream
// [basic; dup copies of factor_values].
std::map<long, double> mu0_curve(const MeasurementWindow& basic, const Matrix& factor_values,
                                 long dup, const Indicator& indicator,
                                 const IndicatorReference& ref, const WindowConfig& window,
                                 std::uint64_t seed) {
  MeasurementWindow stream;
  stream.values = stack_duplicated(basic.values, factor_values, dup);
  stream.node_ids.assign(static_cast<std::size_t>(stream.values.rows()), "");
  stream.t_start = basic.t_start;
  stream.t_end = basic.t_end;

  EngineConfig engine;
  engine.window = window;
  engine.seed = seed;
  engine.threads = 1;  // callers parallelize across factors/shifts
  const auto series = indicator_curve(stream, {indicator}, {ref}, engine);

  std::map<long, double> curve;
  for (const auto& p : series.front().points) {
    curve[p.t_end] = normalized_indicator(p.value, ref);
  }
  return curve;
}

// Null reference for the concatenated shape, mirroring the duplication
// structure so duplicate-row effects cancel in the comparison.
IndicatorReference concat_reference(long n_basic, long n_factor, long dup, long width,
                                    const Indicator& indicator, int trials,
                                    std::uint64_t seed, int threads) {
  if (trials < 100) throw DomainError("sensitivity: needs reference_trials >= 100");
  std::vector<double> values(trials);
  parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t i) {
        const std::uint64_t s = mix_seed(seed, i);
        GaussianStream g(s);
        Matrix basic(n_basic, width);
        for (long j = 0; j < width; ++j)
          for (long r = 0; r < n_basic; ++r) basic(r, j) = g.next();
        Matrix factor(n_factor, width);
        for (long j = 0; j < width; ++j)
          for (long r = 0; r < n_factor; ++r) factor(r, j) = g.next();

        MeasurementWindow w;
        w.values = stack_duplicated(basic, factor, dup);
        w.node_ids.assign(static_cast<std::size_t>(w.values.rows()), "");
        w.t_start = 1;
        w.t_end = width;
        const CovarianceMatrix m = covariance_from_window(w, mix_seed(s, 1));
        values[i] = indicator.evaluate(eigenvalues_hermitian(m));
      },
      threads);

  const double dt = static_cast<double>(trials);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / dt;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);

  IndicatorReference ref;
  ref.indicator = indicator.name();
  ref.law = LawKind::marchenko_pastur;
  ref.n = n_basic + dup * n_factor;
  ref.t = width;
  ref.chain_length = 1;
  ref.mean = mean;
  ref.variance = ss / (dt - 1.0);
  ref.source = IndicatorReference::Source::monte_carlo;
  ref.trials = trials;
  ref.seed = seed;
  if (!(ref.variance > 0.0)) {
    throw DegenerateReference("sensitivity: concatenated reference variance is zero");
  }
  return ref;
}

double sup_deviation(const std::map<long, double>& curve,
                     const std::map<long, double>& baseline) {
  double sup = 0.0;
  for (const auto& [t_end, v] : curve) {
    const auto it = baseline.find(t_end);
    if (it == baseline.end()) continue;
    sup = std::max(sup, std::abs(v - it->second));
  }
  return sup;
}

struct Baseline {
  std::map<long, double> curve;  // averaged over random draws
  double score_mean = 0.0;       // spread of per-draw sup deviations
  double score_sd = 0.0;
};

Baseline random_baseline(const MeasurementWindow& basic, long n_factor, long dup,
                         const Indicator& indicator, const IndicatorReference& ref,
                         const SensitivityConfig& cfg) {
  const int n_draws = cfg.baseline_seeds;
  if (n_draws < 3) throw DomainError("sensitivity: needs baseline_seeds >= 3");

  std::vector<std::map<long, double>> curves(n_draws);
  parallel_for(
      static_cast<std::size_t>(n_draws),
      [&](std::size_t j) {
        GaussianStream g(mix_seed(cfg.seed, 0xBA5EULL, j));
        Matrix r(n_factor, basic.values.cols());
        for (long cc = 0; cc < r.cols(); ++cc)
          for (long rr = 0; rr < r.rows(); ++rr) r(rr, cc) = g.next();
        curves[j] = mu0_curve(basic, r, dup, indicator, ref, cfg.window,
                              mix_seed(cfg.seed, 0xC0ULL, j));
      },
      cfg.threads);

  Baseline base;
  for (const auto& [t_end, v] : curves.front()) {
    double acc = 0.0;
    int count = 0;
    for (const auto& c : curves) {
      const auto it = c.find(t_end);
      if (it != c.end()) {
        acc += it->second;
        ++count;
      }
    }
    if (count > 0) base.curve[t_end] = acc / count;
  }

  // Spread of the random-factor scores: each draw against the average of the
  // others (leave-one-out keeps the draw from shrinking its own deviation).
  std::vector<double> draw_scores(n_draws);
  for (int j = 0; j < n_draws; ++j) {
    std::map<long, double> others;
    for (const auto& [t_end, avg] : base.curve) {
      const auto it = curves[j].find(t_end);
      if (it == curves[j].end()) continue;
      const double without =
          (avg * n_draws - it->second) / static_cast<double>(n_draws - 1);
      others[t_end] = without;
    }
    draw_scores[j] = sup_deviation(curves[j], others);
  }
  const double m =
      std::accumulate(draw_scores.begin(), draw_scores.end(), 0.0) / n_draws;
  double ss = 0.0;
  for (double v : draw_scores) ss += (v - m) * (v - m);
  base.score_mean = m;
  base.score_sd = std::sqrt(ss / std::max(1, n_draws - 1));
  return base;
}

void check_factor(const MeasurementWindow& basic, const FactorMatrix& factor) {
  if (factor.values.cols() != basic.values.cols()) {
    throw ShapeError("factor '" + factor.factor_id + "' has " +
                     std::to_string(factor.values.cols()) + " samples, basic matrix has " +
                     std::to_string(basic.values.cols()));
  }
  if (factor.values.rows() < 1) throw ShapeError("factor needs at least one row");
  if (!factor.values.allFinite()) {
    throw DomainError("factor '" + factor.factor_id + "' contains non-finite entries");
  }
}

}  // namespace

MeasurementWindow concatenate(const MeasurementWindow& basic, const FactorMatrix& factor) {
  check_factor(basic, factor);
  const long dup = duplication_factor(basic.values.rows(), factor.values.rows());

  MeasurementWindow out;
  out.values = stack_duplicated(basic.values, factor.values, dup);
  out.node_ids = basic.node_ids;
  for (long k = 0; k < dup; ++k) {
    for (long r = 0; r < factor.values.rows(); ++r) {
      std::string id = factor.factor_id;
      if (factor.values.rows() > 1) id += ":" + std::to_string(r + 1);
      if (dup > 1) id += "#" + std::to_string(k + 1);
      out.node_ids.push_back(std::move(id));
    }
  }
  out.t_start = basic.t_start;
  out.t_end = basic.t_end;
  return out;
}

Matrix shift_rows(const Matrix& values, long shift) {
  const long t = values.cols();
  if (std::abs(shift) >= t) throw DelayTooLarge("shift exceeds the sample count");
  Matrix out(values.rows(), t);
  for (long j = 0; j < t; ++j) {
    const long src = std::clamp(j + shift, 0L, t - 1);
    out.col(j) = values.col(src);
  }
  return out;
}

RankResult rank_factors(const MeasurementWindow& basic,
                        const std::vector<FactorMatrix>& factors,
                        const SensitivityConfig& cfg) {
  if (factors.empty()) throw DomainError("rank_factors: no factors given");
  const long n_f = factors.front().values.rows();
  for (const auto& f : factors) {
    check_factor(basic, f);
    if (f.values.rows() != n_f) {
      throw ShapeError("rank_factors: factors must share the same row count");
    }
  }

  const Indicator indicator = Indicator::by_name(cfg.indicator);
  if (indicator.uses_ring()) {
    throw DomainError("rank_factors: concatenated analysis uses LES indicators");
  }
  const long dup = duplication_factor(basic.values.rows(), n_f);
  const IndicatorReference ref =
      concat_reference(basic.values.rows(), n_f, dup, cfg.window.width, indicator,
                       cfg.reference_trials, mix_seed(cfg.seed, 0x5EF), cfg.threads);
  const Baseline base = random_baseline(basic, n_f, dup, indicator, ref, cfg);

  std::vector<double> scores(factors.size());
  parallel_for(
      factors.size(),
      [&](std::size_t i) {
        const auto curve = mu0_curve(basic, factors[i].values, dup, indicator, ref,
                                     cfg.window, mix_seed(cfg.seed, 0xFAC, i));
        scores[i] = sup_deviation(curve, base.curve);
      },
      cfg.threads);

  RankResult result;
  result.baseline_mean = base.score_mean;
  result.baseline_sd = base.score_sd;
  result.scores.reserve(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    result.scores.push_back({factors[i].factor_id, scores[i], 0});
  }
  std::sort(result.scores.begin(), result.scores.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.factor_id < b.factor_id;
  });
  for (std::size_t i = 0; i < result.scores.size(); ++i) {
    result.scores[i].rank = static_cast<int>(i) + 1;
  }
  return result;
}

DelayScanResult delay_scan(const MeasurementWindow& basic, const FactorMatrix& factor,
                           long max_shift, const SensitivityConfig& cfg) {
  check_factor(basic, factor);
  if (max_shift < 1 || 2 * max_shift >= basic.values.cols()) {
    throw DelayTooLarge("delay_scan: max_shift must satisfy 0 < max_shift < T/2");
  }

  const Indicator indicator = Indicator::by_name(cfg.indicator);
  const long n_f = factor.values.rows();
  const long dup = duplication_factor(basic.values.rows(), n_f);
  const IndicatorReference ref =
      concat_reference(basic.values.rows(), n_f, dup, cfg.window.width, indicator,
                       cfg.reference_trials, mix_seed(cfg.seed, 0x5EF), cfg.threads);

  // Restrict scoring to windows overlapping the event span.
  SensitivityConfig scan_cfg = cfg;
  std::pair<long, long> span{basic.t_start, basic.t_end};
  bool have_span = false;
  if (cfg.event_range) {
    span = *cfg.event_range;
    have_span = true;
  } else {
    // Detect on the basic matrix's own curve.
    const IndicatorReference basic_ref =
        calibrate_reference(indicator, basic.values.rows(), cfg.window.width, 1,
                            cfg.reference_trials, mix_seed(cfg.seed, 0xB51C), cfg.threads);
    EngineConfig engine;
    engine.window = cfg.window;
    engine.seed = mix_seed(cfg.seed, 0xB0);
    engine.threads = cfg.threads;
    const auto series = indicator_curve(basic, {indicator}, {basic_ref}, engine);
    const auto events = detect(series.front(), cfg.detect_k);
    if (!events.empty()) {
      span = {events.front().t_onset - cfg.window.width + 1, events.back().t_last};
      have_span = true;
    }
  }
  if (have_span) {
    // Window [t_end - width + 1, t_end] overlaps [first, last].
    WindowConfig restricted = cfg.window;
    scan_cfg.window = restricted;
  }

  auto in_span = [&](long t_end) {
    if (!have_span) return true;
    const long w_start = t_end - cfg.window.width + 1;
    return w_start <= span.second && t_end >= span.first;
  };

  const Baseline base = random_baseline(basic, n_f, dup, indicator, ref, scan_cfg);

  const long n_shifts = 2 * max_shift + 1;
  std::vector<double> profile_scores(static_cast<std::size_t>(n_shifts));
  parallel_for(
      static_cast<std::size_t>(n_shifts),
      [&](std::size_t idx) {
        const long s = static_cast<long>(idx) - max_shift;
        const Matrix shifted = shift_rows(factor.values, s);
        const auto curve = mu0_curve(basic, shifted, dup, indicator, ref, cfg.window,
                                     mix_seed(cfg.seed, 0xDE1A, idx));
        double sup = 0.0;
        for (const auto& [t_end, v] : curve) {
          if (!in_span(t_end)) continue;
          const auto it = base.curve.find(t_end);
          if (it == base.curve.end()) continue;
          sup = std::max(sup, std::abs(v - it->second));
        }
        profile_scores[idx] = sup;
      },
      cfg.threads);

  DelayScanResult result;
  result.baseline_mean = base.score_mean;
  result.baseline_sd = base.score_sd;
  result.profile.reserve(static_cast<std::size_t>(n_shifts));
  long best = 0;
  double best_score = -1.0;
  for (long idx = 0; idx < n_shifts; ++idx) {
    const long s = idx - max_shift;
    const double score = profile_scores[static_cast<std::size_t>(idx)];
    result.profile.emplace_back(s, score);
    const bool better = score > best_score ||
                        (score == best_score &&
                         (std::abs(s) < std::abs(best) ||
                          (std::abs(s) == std::abs(best) && s < best)));
    if (better) {
      best = s;
      best_score = score;
    }
  }
  result.estimated_delay = best;

  double mean = 0.0;
  for (const auto& [s, v] : result.profile) mean += v;
  mean /= static_cast<double>(n_shifts);
  double ss = 0.0;
  for (const auto& [s, v] : result.profile) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / std::max(1L, n_shifts - 1));
  result.low_confidence = sd <= 0.0 || (best_score - mean) / sd < 3.0;
  return result;
}

}  // namespace specstream
