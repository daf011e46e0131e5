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

#include "specstream/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "specstream/errors.hpp"
#include "specstream/pipeline.hpp"
#include "specstream/rng.hpp"

namespace specstream {

ResponseModel ResponseModel::synthetic_ring(long n, double corr_length, double step_mw,
                                            double step_pu, double base_v) {
  if (n < 2) throw ShapeError("ResponseModel: needs at least 2 nodes");
  if (corr_length <= 0.0 || step_mw <= 0.0 || step_pu <= 0.0) {
    throw DomainError("ResponseModel: scales must be positive");
  }
  const double diag_gain = step_pu * base_v / step_mw;
  Matrix xi(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const long d = std::min(std::abs(i - j), n - std::abs(i - j));
      xi(i, j) = diag_gain * std::exp(-static_cast<double>(d) / corr_length);
    }
  }
  ResponseModel rm;
  rm.sensitivity = std::move(xi);
  rm.base_voltage = Vector::Constant(n, base_v);
  return rm;
}

void Scenario::validate() const {
  if (n_nodes < 2) throw ShapeError("scenario: needs at least 2 nodes");
  if (t_total < 2) throw ShapeError("scenario: needs at least 2 samples");
  if (noise.gamma_mul < 0.0 || noise.gamma_acc < 0.0) {
    throw DomainError("scenario: noise factors must be >= 0");
  }
  if (base_load.size() != n_nodes) throw ShapeError("scenario: base_load length mismatch");
  if (response.sensitivity.rows() != n_nodes || response.sensitivity.cols() != n_nodes ||
      response.base_voltage.size() != n_nodes) {
    throw ShapeError("scenario: response model shape mismatch");
  }
  for (const auto& e : events) {
    if (e.node < 0 || e.node >= n_nodes) throw DomainError("scenario: event node out of range");
    if (e.t_start < 1 || e.t_end > t_total || e.t_start > e.t_end) {
      throw DomainError("scenario: event window outside [1, t_total]");
    }
  }
  for (const auto& [node, d] : delays) {
    if (node < 0 || node >= n_nodes) throw DomainError("scenario: delay node out of range");
    if (d < 0 || d >= t_total / 2) throw DelayTooLarge("scenario: delay must be < T/2");
  }
}

Scenario Scenario::standard_case(std::uint64_t seed) {
  Scenario sc;
  sc.n_nodes = 118;
  sc.t_total = 2500;
  sc.seed = seed;
  sc.base_load = Vector::Constant(sc.n_nodes, 100.0);

  const long event_node = 51;  // node "52"
  sc.base_load[event_node] = 0.0;
  sc.events.push_back({event_node, 501, 900, EventKind::step, 30.0, 0.0});
  sc.events.push_back({event_node, 901, 1300, EventKind::step, 120.0, 0.0});
  // Linear growth 0.25 MW per sample, continuing from the 120 MW plateau.
  sc.events.push_back({event_node, 1301, 2500, EventKind::ramp, 120.25, 0.25});

  sc.response = ResponseModel::synthetic_ring(sc.n_nodes);
  return sc;
}

Matrix load_series(const Scenario& sc) {
  sc.validate();
  const long n = sc.n_nodes;
  const long t = sc.t_total;

  Matrix base = Matrix::Zero(n, t);
  for (long i = 0; i < n; ++i) base.row(i).setConstant(sc.base_load[i]);
  for (const auto& e : sc.events) {
    for (long s = e.t_start; s <= e.t_end; ++s) {
      double v = e.level;
      if (e.kind == EventKind::ramp) v += e.slope * static_cast<double>(s - e.t_start);
      if (e.kind != EventKind::none) base(e.node, s - 1) += v;
    }
  }

  Matrix loads(n, t);
  for (long i = 0; i < n; ++i) {
    GaussianStream g(mix_seed(sc.seed, static_cast<std::uint64_t>(i)));
    for (long j = 0; j < t; ++j) {
      const double y = base(i, j);
      const double r1 = g.next();
      const double r2 = g.next();
      loads(i, j) = y * (1.0 + sc.noise.gamma_mul * r1) + sc.noise.gamma_acc * r2;
    }
  }
  return loads;
}

Matrix respond(const Matrix& delta_loads, const ResponseModel& rm) {
  if (delta_loads.rows() != rm.sensitivity.rows()) {
    throw ShapeError("respond: load rows do not match the sensitivity matrix");
  }
  Matrix v = -rm.sensitivity * delta_loads;
  v.colwise() += rm.base_voltage;
  return v;
}

Matrix asynchronize(const Matrix& v, const std::map<long, long>& delays) {
  const long t = v.cols();
  Matrix out = v;
  for (const auto& [node, d] : delays) {
    if (node < 0 || node >= v.rows()) throw ShapeError("asynchronize: node out of range");
    if (d < 0 || d >= t / 2) throw DelayTooLarge("asynchronize: delay must be < T/2");
    if (d == 0) continue;
    for (long j = t - 1; j >= d; --j) out(node, j) = v(node, j - d);
    for (long j = 0; j < d; ++j) out(node, j) = v(node, 0);
  }
  return out;
}

MeasurementWindow generate(const Scenario& sc) {
  const Matrix loads = load_series(sc);
  Matrix delta = loads;
  for (long i = 0; i < sc.n_nodes; ++i) delta.row(i).array() -= sc.base_load[i];
  Matrix v = respond(delta, sc.response);
  if (!sc.delays.empty()) v = asynchronize(v, sc.delays);
  return make_window(std::move(v));
}

namespace {

EventKind event_kind_from_name(const std::string& name) {
  if (name == "step") return EventKind::step;
  if (name == "ramp") return EventKind::ramp;
  if (name == "none") return EventKind::none;
  throw DomainError("unknown event kind: " + name);
}

std::string event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::step: return "step";
    case EventKind::ramp: return "ramp";
    case EventKind::none: return "none";
  }
  return "none";
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what(), 0, 0);
  }

  Scenario sc;
  sc.n_nodes = doc.value("n_nodes", 118L);
  sc.t_total = doc.value("t_total", 2500L);
  sc.seed = doc.value("seed", 0ULL);
  sc.noise.gamma_mul = doc.value("noise", nlohmann::json::object()).value("gamma_mul", 0.001);
  sc.noise.gamma_acc = doc.value("noise", nlohmann::json::object()).value("gamma_acc", 0.1);

  if (doc.contains("base_load") && doc["base_load"].is_array()) {
    const auto& arr = doc["base_load"];
    if (static_cast<long>(arr.size()) != sc.n_nodes) {
      throw ShapeError("scenario: base_load length must equal n_nodes");
    }
    sc.base_load.resize(sc.n_nodes);
    for (long i = 0; i < sc.n_nodes; ++i) sc.base_load[i] = arr[i].get<double>();
  } else {
    sc.base_load = Vector::Constant(sc.n_nodes, doc.value("base_load", 100.0));
  }

  for (const auto& item : doc.value("events", nlohmann::json::array())) {
    LoadEvent e;
    e.node = item.at("node").get<long>() - 1;  // JSON uses 1-based node numbers
    e.t_start = item.at("t_start").get<long>();
    e.t_end = item.at("t_end").get<long>();
    e.kind = event_kind_from_name(item.value("kind", "step"));
    e.level = item.value("level", 0.0);
    e.slope = item.value("slope", 0.0);
    sc.events.push_back(e);
  }

  const auto resp = doc.value("response", nlohmann::json::object());
  sc.response = ResponseModel::synthetic_ring(
      sc.n_nodes, resp.value("corr_length", 3.0), resp.value("step_mw", 30.0),
      resp.value("step_pu", 0.01), resp.value("base_voltage", 1.0));

  for (const auto& [key, value] : doc.value("delays", nlohmann::json::object()).items()) {
    sc.delays[std::stol(key) - 1] = value.get<long>();
  }

  sc.validate();
  return sc;
}

std::string scenario_to_json(const Scenario& sc) {
  nlohmann::json doc;
  doc["n_nodes"] = sc.n_nodes;
  doc["t_total"] = sc.t_total;
  doc["seed"] = sc.seed;
  doc["noise"] = {{"gamma_mul", sc.noise.gamma_mul}, {"gamma_acc", sc.noise.gamma_acc}};
  doc["base_load"] = std::vector<double>(sc.base_load.data(),
                                         sc.base_load.data() + sc.base_load.size());
  doc["events"] = nlohmann::json::array();
  for (const auto& e : sc.events) {
    doc["events"].push_back({{"node", e.node + 1},
                             {"t_start", e.t_start},
                             {"t_end", e.t_end},
                             {"kind", event_kind_name(e.kind)},
                             {"level", e.level},
                             {"slope", e.slope}});
  }
  if (!sc.delays.empty()) {
    nlohmann::json d = nlohmann::json::object();
    for (const auto& [node, samples] : sc.delays) d[std::to_string(node + 1)] = samples;
    doc["delays"] = d;
  }
  return doc.dump(2) + "\n";
}

}  // namespace specstream
