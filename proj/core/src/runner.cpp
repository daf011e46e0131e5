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

#include "specstream/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "specstream/errors.hpp"
#include "specstream/io_csv.hpp"
#include "specstream/pipeline.hpp"
#include "specstream/plots.hpp"
#include "specstream/rng.hpp"

namespace specstream {

namespace fs = std::filesystem;

namespace {

std::vector<long> resolve_nodes(const MeasurementWindow& w,
                                const std::vector<std::string>& ids) {
  std::vector<long> rows;
  rows.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = std::find(w.node_ids.begin(), w.node_ids.end(), id);
    if (it == w.node_ids.end()) throw DomainError("node id not found: " + id);
    rows.push_back(static_cast<long>(it - w.node_ids.begin()));
  }
  return rows;
}

WindowConfig window_config(const RunConfig& cfg, const MeasurementWindow& w) {
  WindowConfig wc;
  wc.width = cfg.window_width;
  wc.stride = cfg.window_stride;
  wc.node_subset = resolve_nodes(w, cfg.nodes);
  return wc;
}

long selected_rows(const RunConfig& cfg, const MeasurementWindow& w) {
  return cfg.nodes.empty() ? w.values.rows() : static_cast<long>(cfg.nodes.size());
}

CalibrationStore open_store(const RunConfig& cfg) {
  if (!cfg.calibration_file.empty() && fs::exists(cfg.calibration_file)) {
    return CalibrationStore::load(cfg.calibration_file);
  }
  return {};
}

void persist_store(const RunConfig& cfg, const CalibrationStore& store) {
  if (!cfg.calibration_file.empty()) store.save(cfg.calibration_file);
}

IndicatorReference reference_for(CalibrationStore& store, const RunConfig& cfg,
                                 const Indicator& indicator, long n, long t) {
  if (auto found = store.find_reference(indicator.name(), n, t, cfg.chain_length)) {
    return *found;
  }
  const IndicatorReference ref =
      calibrate_reference(indicator, n, t, cfg.chain_length, cfg.calibration_trials,
                          mix_seed(cfg.seed, 0xCA11B), cfg.threads);
  store.put_reference(ref);
  return ref;
}

ConvergenceEnvelope envelope_for(CalibrationStore& store, const RunConfig& cfg, LawKind law,
                                 long n, long t) {
  if (auto found = store.find_spectrum(law, n, t)) return found->envelope();
  const ConvergenceEnvelope env =
      calibrate_spectrum(law, n, t, std::max(cfg.calibration_trials, 100),
                         mix_seed(cfg.seed, 0x5CA1E), CalibrationEnsemble::window,
                         cfg.threads);
  SpectrumCalibration cal;
  cal.law = law;
  cal.n = n;
  cal.t = law == LawKind::semicircle ? n : t;
  cal.c_density = env.c_density;
  cal.c_ks = env.c_ks;
  cal.epsilon = env.epsilon;
  cal.trials = std::max(cfg.calibration_trials, 100);
  cal.seed = mix_seed(cfg.seed, 0x5CA1E);
  store.put_spectrum(cal);
  return env;
}

fs::path ensure_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::string verdict_to_json(const SpectrumVerdict& v, LawKind law, long n, long t) {
  nlohmann::json doc;
  doc["law"] = law_name(law);
  doc["n"] = n;
  doc["t"] = t;
  doc["anomaly"] = v.anomaly;
  doc["ks_distance"] = v.ks_distance;
  doc["ks_threshold"] = v.ks_threshold;
  doc["ks_exceeded"] = v.ks_exceeded;
  doc["envelope_exited"] = v.envelope_exited;
  doc["worst_x"] = v.worst_x;
  doc["max_scaled_deviation"] = v.max_scaled_deviation;
  return doc.dump(2) + "\n";
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config JSON: ") + e.what(), 0, 0);
  }

  RunConfig cfg;
  cfg.seed = doc.value("seed", 0ULL);
  if (doc.contains("input")) {
    const auto& input = doc["input"];
    if (input.contains("csv")) cfg.input_csv = input["csv"].get<std::string>();
    if (input.contains("scenario")) cfg.scenario = scenario_from_json(input["scenario"].dump());
  }
  if (doc.contains("window")) {
    const auto& w = doc["window"];
    cfg.window_width = w.value("width", 240L);
    cfg.window_stride = w.value("stride", 1L);
    for (const auto& id : w.value("nodes", nlohmann::json::array())) {
      cfg.nodes.push_back(id.get<std::string>());
    }
  }
  cfg.chain_length = doc.value("chain_length", 1);
  if (doc.contains("indicators")) {
    cfg.indicators.clear();
    for (const auto& name : doc["indicators"]) cfg.indicators.push_back(name.get<std::string>());
  }
  cfg.threshold_k = doc.value("detection", nlohmann::json::object()).value("k", 5.0);
  const auto cal = doc.value("calibration", nlohmann::json::object());
  cfg.calibration_file = cal.value("file", std::string{});
  cfg.calibration_trials = cal.value("trials", 200);
  cfg.out_dir = doc.value("out_dir", std::string{"out"});
  cfg.plots = doc.value("plots", false);
  cfg.threads = doc.value("threads", 0);
  return cfg;
}

MeasurementWindow load_input(const RunConfig& cfg) {
  if (!cfg.input_csv.empty()) return ingest_csv(cfg.input_csv);
  if (cfg.scenario) return generate(*cfg.scenario);
  throw DomainError("no input configured: set input.csv or input.scenario");
}

AnalyzeOutput run_analyze(const RunConfig& cfg) {
  const MeasurementWindow stream = load_input(cfg);
  const WindowConfig wc = window_config(cfg, stream);
  const long n_sel = selected_rows(cfg, stream);

  std::vector<Indicator> indicators;
  indicators.reserve(cfg.indicators.size());
  for (const auto& name : cfg.indicators) indicators.push_back(Indicator::by_name(name));
  if (indicators.empty()) throw DomainError("analyze: no indicators configured");

  CalibrationStore store = open_store(cfg);
  std::vector<IndicatorReference> references;
  references.reserve(indicators.size());
  for (const auto& ind : indicators) {
    references.push_back(reference_for(store, cfg, ind, n_sel, wc.width));
  }

  EngineConfig engine;
  engine.window = wc;
  engine.chain_length = cfg.chain_length;
  engine.threshold_k = cfg.threshold_k;
  engine.seed = cfg.seed;
  engine.threads = cfg.threads;

  AnalyzeOutput out;
  out.series = indicator_curve(stream, indicators, references, engine);
  for (const auto& s : out.series) {
    const auto events = detect(s, cfg.threshold_k);
    out.events.insert(out.events.end(), events.begin(), events.end());
  }

  const fs::path dir = ensure_out_dir(cfg);
  const fs::path series_path = dir / "indicators.csv";
  write_text_file(series_path, series_to_csv(out.series));
  out.files.push_back(series_path);
  const fs::path events_path = dir / "events.json";
  write_text_file(events_path, events_to_json(out.events));
  out.files.push_back(events_path);

  if (cfg.plots) {
    for (const auto& s : out.series) {
      const fs::path p = dir / ("series_" + s.indicator + ".svg");
      write_text_file(p, emit_series_plot(s, cfg.threshold_k));
      out.files.push_back(p);
    }
    // Spectrum snapshots at the window with the largest deviation.
    long worst_t_end = -1;
    double worst_abs = -1.0;
    for (const auto& s : out.series) {
      for (const auto& p : s.points) {
        const double z = std::abs(s.sigma_magnitude(p.value));
        if (z > worst_abs) {
          worst_abs = z;
          worst_t_end = p.t_end;
        }
      }
    }
    if (worst_t_end >= 0) {
      MeasurementWindow sub;
      {
        WindowConfig single = wc;
        const auto windows = slide(stream, single);
        for (const auto& w : windows) {
          if (w.t_end == worst_t_end) {
            sub = w;
            break;
          }
        }
      }
      if (sub.values.size() > 0) {
        const std::uint64_t window_seed =
            mix_seed(cfg.seed, static_cast<std::uint64_t>(sub.t_end));
        bool any_ring = false, any_cov = false;
        for (const auto& ind : indicators) (ind.uses_ring() ? any_ring : any_cov) = true;
        if (any_ring) {
          const auto sample =
              eigenvalues_general(ring_from_window(sub, cfg.chain_length, window_seed));
          const LawSpec law = LawSpec::ring(static_cast<double>(n_sel) / wc.width,
                                            cfg.chain_length);
          const fs::path p = dir / ("ring_t" + std::to_string(worst_t_end) + ".svg");
          write_text_file(p, emit_ring_plot(sample, law));
          out.files.push_back(p);
        }
        if (any_cov) {
          const auto sample = eigenvalues_hermitian(covariance_from_window(sub, window_seed));
          const LawSpec law =
              LawSpec::marchenko_pastur(static_cast<double>(n_sel) / wc.width);
          const ConvergenceEnvelope env =
              envelope_for(store, cfg, LawKind::marchenko_pastur, n_sel, wc.width);
          const fs::path p = dir / ("density_t" + std::to_string(worst_t_end) + ".svg");
          write_text_file(p, emit_density_plot(sample, law, env));
          out.files.push_back(p);
        }
      }
    }
  }

  persist_store(cfg, store);
  return out;
}

SpectrumTestOutput run_spectrum_test(const RunConfig& cfg, LawKind law) {
  MeasurementWindow window = load_input(cfg);
  if (!cfg.nodes.empty()) {
    const auto rows = resolve_nodes(window, cfg.nodes);
    Matrix values(static_cast<long>(rows.size()), window.values.cols());
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      values.row(static_cast<long>(i)) = window.values.row(rows[i]);
      ids.push_back(window.node_ids[static_cast<std::size_t>(rows[i])]);
    }
    window = make_window(std::move(values), std::move(ids), window.t_start);
  }

  const long n = window.values.rows();
  long t = window.values.cols();
  SpectralSample sample;
  LawSpec spec = LawSpec::semicircle();
  if (law == LawKind::semicircle) {
    if (t < n) throw ShapeError("spectrum-test: semicircle law needs T >= N");
    // Trailing square section.
    MeasurementWindow square;
    square.values = window.values.rightCols(n);
    square.node_ids = window.node_ids;
    square.t_end = window.t_end;
    square.t_start = window.t_end - n + 1;
    sample = wigner_spectrum(standardize_rows(square, mix_seed(cfg.seed, 0xD0)));
    t = n;
  } else if (law == LawKind::marchenko_pastur) {
    sample = eigenvalues_hermitian(covariance_from_window(window, mix_seed(cfg.seed, 0xD0)));
    spec = LawSpec::marchenko_pastur(static_cast<double>(n) / t);
  } else {
    throw UnsupportedLaw("spectrum-test: supported laws are marchenko-pastur and semicircle");
  }

  CalibrationStore store = open_store(cfg);
  const ConvergenceEnvelope env = envelope_for(store, cfg, law, n, t);

  SpectrumTestOutput out;
  out.law = law;
  out.verdict = spectrum_test(sample, spec, env);

  const fs::path dir = ensure_out_dir(cfg);
  const fs::path verdict_path = dir / "verdict.json";
  write_text_file(verdict_path, verdict_to_json(out.verdict, law, n, t));
  out.files.push_back(verdict_path);
  const fs::path density_path = dir / "density.svg";
  write_text_file(density_path, emit_density_plot(sample, spec, env));
  out.files.push_back(density_path);

  persist_store(cfg, store);
  return out;
}

GenOutput run_gen(const RunConfig& cfg, bool emit_loads) {
  Scenario sc = cfg.scenario ? *cfg.scenario : Scenario::standard_case(cfg.seed);
  const fs::path dir = ensure_out_dir(cfg);

  GenOutput out;
  out.voltages_csv = dir / "voltages.csv";
  emit_csv(generate(sc), out.voltages_csv);
  out.scenario_json = dir / "scenario.json";
  write_text_file(out.scenario_json, scenario_to_json(sc));
  if (emit_loads) {
    MeasurementWindow loads = make_window(load_series(sc));
    out.loads_csv = dir / "loads.csv";
    emit_csv(loads, *out.loads_csv);
  }
  return out;
}

namespace {

std::vector<FactorMatrix> collect_factors(const MeasurementWindow& basic,
                                          const RankOptions& opts) {
  std::vector<FactorMatrix> factors;
  if (!opts.factors_csv.empty()) {
    const MeasurementWindow fw = ingest_csv(opts.factors_csv);
    if (fw.values.cols() != basic.values.cols()) {
      throw ShapeError("factors file sample count differs from the basic matrix");
    }
    for (long i = 0; i < fw.values.rows(); ++i) {
      factors.push_back({fw.values.row(i), fw.node_ids[static_cast<std::size_t>(i)]});
    }
  }
  for (const auto& id : opts.self_nodes) {
    const auto it = std::find(basic.node_ids.begin(), basic.node_ids.end(), id);
    if (it == basic.node_ids.end()) throw DomainError("node id not found: " + id);
    const long row = static_cast<long>(it - basic.node_ids.begin());
    factors.push_back({basic.values.row(row), id});
  }
  if (factors.empty()) throw DomainError("rank-factors: no factors given");
  return factors;
}

SensitivityConfig sensitivity_config(const RunConfig& cfg) {
  SensitivityConfig sc;
  sc.window.width = cfg.window_width;
  sc.window.stride = cfg.window_stride;
  for (const auto& name : cfg.indicators) {
    if (name != "msr") {
      sc.indicator = name;
      break;
    }
  }
  sc.reference_trials = std::max(cfg.calibration_trials, 100);
  sc.seed = cfg.seed;
  sc.threads = cfg.threads;
  sc.detect_k = cfg.threshold_k;
  return sc;
}

}  // namespace

RankOutput run_rank_factors(const RunConfig& cfg, const RankOptions& opts) {
  const MeasurementWindow basic = load_input(cfg);
  const auto factors = collect_factors(basic, opts);
  const SensitivityConfig sc = sensitivity_config(cfg);

  RankOutput out;
  out.result = rank_factors(basic, factors, sc);

  const fs::path dir = ensure_out_dir(cfg);
  const fs::path scores_path = dir / "scores.csv";
  write_text_file(scores_path, scores_to_csv(out.result.scores));
  out.files.push_back(scores_path);

  nlohmann::json doc;
  doc["baseline_mean"] = out.result.baseline_mean;
  doc["baseline_sd"] = out.result.baseline_sd;
  const fs::path stats_path = dir / "ranking.json";
  write_text_file(stats_path, doc.dump(2) + "\n");
  out.files.push_back(stats_path);
  return out;
}

DelayOutput run_scan_delay(const RunConfig& cfg, const DelayOptions& opts) {
  const MeasurementWindow basic = load_input(cfg);

  FactorMatrix factor;
  if (!opts.factor_csv.empty()) {
    const MeasurementWindow fw = ingest_csv(opts.factor_csv);
    factor.values = fw.values.row(0);
    factor.factor_id = fw.node_ids.front();
  } else if (!opts.self_node.empty()) {
    const auto it = std::find(basic.node_ids.begin(), basic.node_ids.end(), opts.self_node);
    if (it == basic.node_ids.end()) throw DomainError("node id not found: " + opts.self_node);
    factor.values = basic.values.row(static_cast<long>(it - basic.node_ids.begin()));
    factor.factor_id = opts.self_node;
  } else {
    throw DomainError("scan-delay: set --factors or --self");
  }

  SensitivityConfig sc = sensitivity_config(cfg);
  sc.event_range = opts.event_range;

  DelayOutput out;
  out.result = delay_scan(basic, factor, opts.max_shift, sc);

  const fs::path dir = ensure_out_dir(cfg);
  const fs::path profile_path = dir / "delay_profile.csv";
  write_text_file(profile_path, delay_profile_to_csv(out.result.profile));
  out.files.push_back(profile_path);

  nlohmann::json doc;
  doc["factor_id"] = factor.factor_id;
  doc["estimated_delay"] = out.result.estimated_delay;
  doc["low_confidence"] = out.result.low_confidence;
  doc["baseline_mean"] = out.result.baseline_mean;
  doc["baseline_sd"] = out.result.baseline_sd;
  const fs::path delay_path = dir / "delay.json";
  write_text_file(delay_path, doc.dump(2) + "\n");
  out.files.push_back(delay_path);
  return out;
}

std::filesystem::path run_calibrate(const RunConfig& cfg, const CalibrateRequest& req) {
  fs::path file = cfg.calibration_file.empty()
                      ? ensure_out_dir(cfg) / "calibration.json"
                      : fs::path(cfg.calibration_file);

  CalibrationStore store;
  if (fs::exists(file)) store = CalibrationStore::load(file);

  for (const LawKind law : req.laws) {
    const ConvergenceEnvelope env =
        calibrate_spectrum(law, req.n, req.t, req.trials, mix_seed(cfg.seed, 0x5CA1E),
                           CalibrationEnsemble::window, cfg.threads);
    SpectrumCalibration cal;
    cal.law = law;
    cal.n = req.n;
    cal.t = law == LawKind::semicircle ? req.n : req.t;
    cal.c_density = env.c_density;
    cal.c_ks = env.c_ks;
    cal.epsilon = env.epsilon;
    cal.trials = req.trials;
    cal.seed = mix_seed(cfg.seed, 0x5CA1E);
    store.put_spectrum(cal);
  }
  for (const auto& name : req.indicators) {
    const Indicator ind = Indicator::by_name(name);
    store.put_reference(calibrate_reference(ind, req.n, req.t, req.chain_length,
                                            std::max(req.trials, 100),
                                            mix_seed(cfg.seed, 0xCA11B), cfg.threads));
  }

  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  store.save(file);
  return file;
}

}  // namespace specstream
