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
#include <map>
#include <string>
#include <vector>

#include "specstream/types.hpp"

namespace specstream {

enum class EventKind { none, step, ramp };

/// One scheduled change of a node's power demand. Steps hold `level` MW on
/// [t_start, t_end]; ramps start at `level` and add `slope` MW per sample.
struct LoadEvent {
  long node = 0;  // 0-based row
  long t_start = 1;
  long t_end = 1;
  EventKind kind = EventKind::step;
  double level = 0.0;
  double slope = 0.0;
};

/// Multiplicative and additive Gaussian load noise:
/// y~ = y (1 + gamma_mul r1) + gamma_acc r2.
struct NoiseSpec {
  double gamma_mul = 0.001;
  double gamma_acc = 0.1;
};

/// Linear grid response: V(t) = V_base - Xi * dP(t). The synthetic default
/// couples nodes on a ring with exponentially decaying sensitivity and is
/// scaled so a 30 MW step moves the stepped node's voltage by ~1% of base.
struct ResponseModel {
  Matrix sensitivity;   // Xi, N x N
  Vector base_voltage;  // length N

  static ResponseModel synthetic_ring(long n, double corr_length = 3.0,
                                      double step_mw = 30.0, double step_pu = 0.01,
                                      double base_v = 1.0);
};

struct Scenario {
  long n_nodes = 118;
  long t_total = 2500;
  std::vector<LoadEvent> events;
  NoiseSpec noise;
  Vector base_load;  // MW per node
  ResponseModel response;
  std::map<long, long> delays;  // node -> samples, applied to the voltages
  std::uint64_t seed = 0;

  void validate() const;

  /// 118-node case: event node 52 (1-based) with steps to 30 MW at t=501 and
  /// 120 MW at t=901, then a ramp of slope 1/4 from t=1301; all other nodes
  /// hold 100 MW base demand with standard noise.
  static Scenario standard_case(std::uint64_t seed);
};

/// Per-node demand over time: base plus scheduled events, with noise applied
/// per sample. Deterministic given the scenario seed.
Matrix load_series(const Scenario& sc);

/// Voltage response to demand deviations: V(:,t) = V_base - Xi * dP(:,t).
Matrix respond(const Matrix& delta_loads, const ResponseModel& rm);

/// Shifts selected rows right by their delay, replicating the first sample
/// into the vacated prefix. Delays must stay below T/2.
Matrix asynchronize(const Matrix& v, const std::map<long, long>& delays);

/// Full chain: loads -> deviations -> voltages -> optional delays, packaged
/// as a measurement window with 1-based node ids.
MeasurementWindow generate(const Scenario& sc);

/// Scenario (de)serialization; see README for the schema.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& sc);

}  // namespace specstream
