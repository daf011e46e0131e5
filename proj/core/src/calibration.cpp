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

#include "specstream/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "specstream/errors.hpp"
#include "specstream/kde.hpp"
#include "specstream/parallel.hpp"
#include "specstream/pipeline.hpp"
#include "specstream/rng.hpp"

namespace specstream {

namespace {

// Safety factor above the worst null-trial statistic. Keeps fresh null
// samples below threshold while staying sensitive to genuine displacements.
constexpr double kHeadroom = 1.05;

MeasurementWindow gaussian_window(long n, long t, std::uint64_t seed) {
  GaussianStream g(seed);
  Matrix values(n, t);
  for (long j = 0; j < t; ++j)
    for (long i = 0; i < n; ++i) values(i, j) = g.next();
  return make_window(std::move(values));
}

SpectralSample null_spectrum(LawKind law, long n, long t, std::uint64_t seed,
                             CalibrationEnsemble ensemble) {
  if (ensemble == CalibrationEnsemble::unitary) {
    return law == LawKind::semicircle ? gue_spectrum(n, seed) : lue_spectrum(n, t, seed);
  }
  if (law == LawKind::semicircle) {
    const MeasurementWindow w = gaussian_window(n, n, seed);
    return wigner_spectrum(standardize_rows(w, mix_seed(seed, 0xD0)));
  }
  const MeasurementWindow w = gaussian_window(n, t, seed);
  return eigenvalues_hermitian(covariance_from_window(w, mix_seed(seed, 0xD0)));
}

double envelope_weight(const LawSpec& law, double x) {
  if (law.kind == LawKind::semicircle) return 4.0 - x * x;
  return (x - law.support_lower()) * (law.support_upper() - x);
}

}  // namespace

ConvergenceEnvelope calibrate_spectrum(LawKind law, long n, long t, int trials,
                                       std::uint64_t seed, CalibrationEnsemble ensemble,
                                       int threads) {
  if (law == LawKind::ring) {
    throw UnsupportedLaw("calibrate_spectrum: ring law has no envelope");
  }
  if (trials < 50) throw DomainError("calibrate_spectrum: needs trials >= 50");

  LawSpec spec = law == LawKind::semicircle
                     ? LawSpec::semicircle()
                     : LawSpec::marchenko_pastur(static_cast<double>(n) / t);
  ConvergenceEnvelope env;
  env.law = spec;
  env.n = n;
  env.epsilon = 1.0;
  const auto [lo, hi] = env.interior_interval();

  std::vector<double> density_stat(trials);
  std::vector<double> ks_stat(trials);
  parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t i) {
        const SpectralSample s = null_spectrum(law, n, t, mix_seed(seed, i), ensemble);
        const std::vector<double> evals = s.real_parts();
        ks_stat[i] = kolmogorov_distance(EsdFunction(evals), spec) * static_cast<double>(n);

        const KernelDensity kde(evals);
        double worst = 0.0;
        constexpr int kGridPoints = 512;
        for (int j = 0; j < kGridPoints; ++j) {
          const double x = lo + (hi - lo) * (static_cast<double>(j) + 0.5) / kGridPoints;
          const double dev = std::abs(kde(x) - law_density(spec, x)) *
                             static_cast<double>(n) * envelope_weight(spec, x);
          worst = std::max(worst, dev);
        }
        density_stat[i] = worst;
      },
      threads);

  env.c_density = *std::max_element(density_stat.begin(), density_stat.end()) * kHeadroom;
  env.c_ks = *std::max_element(ks_stat.begin(), ks_stat.end()) * kHeadroom;
  return env;
}

ConvergenceEnvelope SpectrumCalibration::envelope() const {
  ConvergenceEnvelope env;
  env.law = law == LawKind::semicircle
                ? LawSpec::semicircle()
                : LawSpec::marchenko_pastur(static_cast<double>(n) / t);
  env.n = n;
  env.c_density = c_density;
  env.c_ks = c_ks;
  env.epsilon = epsilon;
  return env;
}

std::optional<SpectrumCalibration> CalibrationStore::find_spectrum(LawKind law, long n,
                                                                   long t) const {
  for (const auto& s : spectra_) {
    if (s.law == law && s.n == n && (law == LawKind::semicircle || s.t == t)) return s;
  }
  return std::nullopt;
}

void CalibrationStore::put_spectrum(const SpectrumCalibration& cal) {
  for (auto& s : spectra_) {
    if (s.law == cal.law && s.n == cal.n && s.t == cal.t) {
      s = cal;
      return;
    }
  }
  spectra_.push_back(cal);
}

std::optional<IndicatorReference> CalibrationStore::find_reference(
    const std::string& indicator, long n, long t, int chain_length) const {
  for (const auto& r : references_) {
    if (r.indicator == indicator && r.n == n && r.t == t && r.chain_length == chain_length) {
      return r;
    }
  }
  return std::nullopt;
}

void CalibrationStore::put_reference(const IndicatorReference& ref) {
  for (auto& r : references_) {
    if (r.indicator == ref.indicator && r.n == ref.n && r.t == ref.t &&
        r.chain_length == ref.chain_length) {
      r = ref;
      return;
    }
  }
  references_.push_back(ref);
}

std::string CalibrationStore::to_json() const {
  nlohmann::json doc;
  doc["spectrum"] = nlohmann::json::array();
  for (const auto& s : spectra_) {
    doc["spectrum"].push_back({{"law", law_name(s.law)},
                               {"n", s.n},
                               {"t", s.t},
                               {"c_density", s.c_density},
                               {"c_ks", s.c_ks},
                               {"epsilon", s.epsilon},
                               {"mc_trials", s.trials},
                               {"seed", s.seed}});
  }
  doc["indicators"] = nlohmann::json::array();
  for (const auto& r : references_) {
    doc["indicators"].push_back(
        {{"indicator", r.indicator},
         {"law", law_name(r.law)},
         {"n", r.n},
         {"t", r.t},
         {"chain_length", r.chain_length},
         {"mean", r.mean},
         {"variance", r.variance},
         {"source",
          r.source == IndicatorReference::Source::monte_carlo ? "monte-carlo" : "quadrature"},
         {"trials", r.trials},
         {"seed", r.seed}});
  }
  return doc.dump(2) + "\n";
}

CalibrationStore CalibrationStore::from_json(const std::string& text) {
  CalibrationStore store;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("calibration JSON: ") + e.what(), 0, 0);
  }
  for (const auto& item : doc.value("spectrum", nlohmann::json::array())) {
    SpectrumCalibration s;
    s.law = law_from_name(item.at("law").get<std::string>());
    s.n = item.at("n").get<long>();
    s.t = item.at("t").get<long>();
    s.c_density = item.at("c_density").get<double>();
    s.c_ks = item.at("c_ks").get<double>();
    s.epsilon = item.value("epsilon", 1.0);
    s.trials = item.value("mc_trials", 0);
    s.seed = item.value("seed", 0ULL);
    store.spectra_.push_back(s);
  }
  for (const auto& item : doc.value("indicators", nlohmann::json::array())) {
    IndicatorReference r;
    r.indicator = item.at("indicator").get<std::string>();
    r.law = law_from_name(item.value("law", "marchenko-pastur"));
    r.n = item.at("n").get<long>();
    r.t = item.at("t").get<long>();
    r.chain_length = item.value("chain_length", 1);
    r.mean = item.at("mean").get<double>();
    r.variance = item.at("variance").get<double>();
    r.source = item.value("source", "monte-carlo") == "quadrature"
                   ? IndicatorReference::Source::quadrature
                   : IndicatorReference::Source::monte_carlo;
    r.trials = item.value("trials", 0);
    r.seed = item.value("seed", 0ULL);
    store.references_.push_back(r);
  }
  return store;
}

CalibrationStore CalibrationStore::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open calibration file: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void CalibrationStore::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw Error("cannot write calibration file: " + file.string());
  out << to_json();
}

}  // namespace specstream
