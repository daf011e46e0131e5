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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace specstream {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

/// Raw N x T slice of a measurement stream. Rows are nodes, columns are
/// consecutive samples; t_end - t_start + 1 == cols.
struct MeasurementWindow {
  Matrix values;
  std::vector<std::string> node_ids;
  long t_start = 1;
  long t_end = 1;

  long nodes() const { return values.rows(); }
  long samples() const { return values.cols(); }
};

/// Validates and assembles a window: N >= 2, T >= 2, all entries finite.
/// Node ids default to "1".."N" when empty.
MeasurementWindow make_window(Matrix values, std::vector<std::string> node_ids = {},
                              long t_start = 1);

/// Row-standardized window: every row has sample mean 0 and variance 1
/// (population denominator). Rows listed in degenerate_rows were constant in
/// the source and were replaced by seeded noise.
struct StandardizedMatrix {
  Matrix values;
  std::vector<long> degenerate_rows;
  std::vector<std::string> node_ids;
  long t_start = 1;
  long t_end = 1;

  long nodes() const { return values.rows(); }
  long samples() const { return values.cols(); }
};

/// Square complex matrix from the ring transform chain; each row of `values`
/// has variance 1/N so the outer spectral edge sits on the unit circle.
struct RingMatrix {
  ComplexMatrix values;
  int chain_length = 1;
  double ratio = 0.0;  // c = N/T of the source windows
  long source_t = 0;
};

/// Hermitian sample covariance N x N with aspect ratio c = N/T.
struct CovarianceMatrix {
  ComplexMatrix values;
  double ratio = 0.0;
  long source_t = 0;
};

enum class SampleKind { ring, covariance, hermitian };

/// Eigenvalue set of one analysis matrix. Ring samples carry genuinely
/// complex values sorted by modulus; covariance/hermitian samples are real,
/// ascending, stored with zero imaginary part.
struct SpectralSample {
  SampleKind kind = SampleKind::covariance;
  std::vector<std::complex<double>> eigenvalues;
  long n = 0;
  long t = 0;
  int chain_length = 1;

  double ratio() const { return t > 0 ? static_cast<double>(n) / static_cast<double>(t) : 0.0; }
  std::vector<double> real_parts() const;
};

}  // namespace specstream
