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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specstream/errors.hpp"
#include "specstream/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitAnomaly = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string input_csv;
  std::string calibration_file;
  int threads = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config document");
  cmd->add_option("--seed", flags.seed, "run seed (overrides config)");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--input", flags.input_csv, "input measurement CSV");
  cmd->add_option("--calibration", flags.calibration_file, "calibration JSON file");
  cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
}

specstream::RunConfig build_config(const CommonFlags& flags) {
  specstream::RunConfig cfg;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw specstream::Error("cannot open config: " + flags.config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    cfg = specstream::run_config_from_json(buf.str());
  }
  if (flags.seed) {
    cfg.seed = *flags.seed;
    if (cfg.scenario) cfg.scenario->seed = *flags.seed;
  }
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (!flags.input_csv.empty()) {
    cfg.input_csv = flags.input_csv;
    cfg.scenario.reset();
  }
  if (!flags.calibration_file.empty()) cfg.calibration_file = flags.calibration_file;
  if (flags.threads >= 0) cfg.threads = flags.threads;
  return cfg;
}

int data_error(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of sensor measurement streams"};
  app.require_subcommand(1);

  CommonFlags flags;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic scenario as CSV");
  add_common(gen, flags);
  bool gen_loads = false;
  gen->add_flag("--loads", gen_loads, "also write the load series");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "sliding-window indicators and events");
  add_common(analyze, flags);
  std::vector<std::string> analyze_indicators;
  analyze->add_option("--indicator", analyze_indicators,
                      "indicator names (msr, power2, power3, power4, logdet, lrf)");
  bool analyze_plots = false;
  analyze->add_flag("--plots", analyze_plots, "emit SVG plots");
  long analyze_width = 0, analyze_stride = 0;
  analyze->add_option("--width", analyze_width, "window width in samples");
  analyze->add_option("--stride", analyze_stride, "window stride in samples");
  double analyze_k = 0.0;
  analyze->add_option("--k", analyze_k, "detection threshold in sigma units");

  // spectrum-test
  auto* spectrum = app.add_subcommand("spectrum-test", "goodness-of-fit verdict for one window");
  add_common(spectrum, flags);
  std::string spectrum_law = "marchenko-pastur";
  spectrum->add_option("--law", spectrum_law, "marchenko-pastur | semicircle");

  // rank-factors
  auto* rank = app.add_subcommand("rank-factors", "score candidate factors by concatenation");
  add_common(rank, flags);
  specstream::RankOptions rank_opts;
  rank->add_option("--factors", rank_opts.factors_csv, "CSV of factor rows");
  rank->add_option("--self", rank_opts.self_nodes, "node ids of the basic matrix to score");

  // scan-delay
  auto* scan = app.add_subcommand("scan-delay", "estimate a factor's sampling delay");
  add_common(scan, flags);
  specstream::DelayOptions delay_opts;
  scan->add_option("--factors", delay_opts.factor_csv, "CSV holding the factor row");
  scan->add_option("--self", delay_opts.self_node, "node id of the basic matrix");
  scan->add_option("--max-shift", delay_opts.max_shift, "largest shift to scan");
  std::vector<long> scan_range;
  scan->add_option("--event-range", scan_range, "restrict scoring to [first, last]")
      ->expected(2);

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "law envelopes and indicator references");
  add_common(calibrate, flags);
  specstream::CalibrateRequest request;
  std::vector<std::string> cal_laws;
  calibrate->add_option("--law", cal_laws, "laws to calibrate (marchenko-pastur, semicircle)");
  calibrate->add_option("--indicator", request.indicators, "indicator references to compute");
  calibrate->add_option("--n", request.n, "node count N");
  calibrate->add_option("--t", request.t, "window width T");
  calibrate->add_option("--chain-length", request.chain_length, "ring chain length L");
  calibrate->add_option("--trials", request.trials, "Monte Carlo trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    specstream::RunConfig cfg = build_config(flags);

    if (gen->parsed()) {
      const auto out = specstream::run_gen(cfg, gen_loads);
      std::cout << "wrote " << out.voltages_csv.string() << "\n";
      return kExitOk;
    }

    if (analyze->parsed()) {
      if (!analyze_indicators.empty()) cfg.indicators = analyze_indicators;
      if (analyze_plots) cfg.plots = true;
      if (analyze_width > 0) cfg.window_width = analyze_width;
      if (analyze_stride > 0) cfg.window_stride = analyze_stride;
      if (analyze_k > 0.0) cfg.threshold_k = analyze_k;
      const auto out = specstream::run_analyze(cfg);
      std::cout << out.events.size() << " event(s); outputs in " << cfg.out_dir << "\n";
      for (const auto& e : out.events) {
        std::cout << "  " << e.indicator << " onset t=" << e.t_onset << " peak "
                  << e.magnitude << " sigma ("
                  << (e.direction == specstream::AnomalyEvent::Direction::above ? "above"
                                                                                : "below")
                  << ")\n";
      }
      return kExitOk;
    }

    if (spectrum->parsed()) {
      const auto law = specstream::law_from_name(spectrum_law);
      const auto out = specstream::run_spectrum_test(cfg, law);
      std::cout << (out.verdict.anomaly ? "anomaly" : "pass")
                << " (ks=" << out.verdict.ks_distance
                << ", threshold=" << out.verdict.ks_threshold << ")\n";
      return out.verdict.anomaly ? kExitAnomaly : kExitOk;
    }

    if (rank->parsed()) {
      const auto out = specstream::run_rank_factors(cfg, rank_opts);
      for (const auto& s : out.result.scores) {
        std::cout << s.rank << ". " << s.factor_id << "  score " << s.score << "\n";
      }
      std::cout << "baseline " << out.result.baseline_mean << " +/- "
                << out.result.baseline_sd << "\n";
      return kExitOk;
    }

    if (scan->parsed()) {
      if (scan_range.size() == 2) {
        delay_opts.event_range = std::make_pair(scan_range[0], scan_range[1]);
      }
      const auto out = specstream::run_scan_delay(cfg, delay_opts);
      std::cout << "estimated delay: " << out.result.estimated_delay
                << (out.result.low_confidence ? " (low confidence)" : "") << "\n";
      return kExitOk;
    }

    if (calibrate->parsed()) {
      for (const auto& name : cal_laws) request.laws.push_back(specstream::law_from_name(name));
      if (request.laws.empty() && request.indicators.empty()) {
        std::cerr << "calibrate: nothing requested; use --law and/or --indicator\n";
        return kExitUsage;
      }
      const auto file = specstream::run_calibrate(cfg, request);
      std::cout << "wrote " << file.string() << "\n";
      return kExitOk;
    }
  } catch (const specstream::Error& e) {
    return data_error(e);
  } catch (const std::exception& e) {
    return data_error(e);
  }

  return kExitUsage;
}
