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

#include "specstream/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "specstream/errors.hpp"
#include "specstream/rng.hpp"

namespace specstream {

namespace {

constexpr double kDegenerateVariance = 1e-12;

// Zero-mean / unit-variance in place, with a second centering pass so the
// residual mean stays at rounding level even for badly scaled input.
void standardize_row(Eigen::Ref<Eigen::RowVectorXd> row) {
  const double t = static_cast<double>(row.size());
  row.array() -= row.mean();
  row.array() -= row.mean();
  const double var = row.squaredNorm() / t;
  row /= std::sqrt(var);
}

void sort_by_modulus(std::vector<std::complex<double>>& vals) {
  std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace

std::vector<double> SpectralSample::real_parts() const {
  std::vector<double> out;
  out.reserve(eigenvalues.size());
  for (const auto& z : eigenvalues) out.push_back(z.real());
  return out;
}

MeasurementWindow make_window(Matrix values, std::vector<std::string> node_ids,
                              long t_start) {
  if (values.rows() < 2 || values.cols() < 2) {
    throw ShapeError("window needs at least 2 nodes and 2 samples, got " +
                     std::to_string(values.rows()) + "x" + std::to_string(values.cols()));
  }
  if (!values.allFinite()) throw DomainError("window contains non-finite entries");
  if (node_ids.empty()) {
    node_ids.reserve(values.rows());
    for (long i = 0; i < values.rows(); ++i) node_ids.push_back(std::to_string(i + 1));
  }
  if (static_cast<long>(node_ids.size()) != values.rows()) {
    throw ShapeError("node id count does not match row count");
  }
  MeasurementWindow w;
  w.t_start = t_start;
  w.t_end = t_start + values.cols() - 1;
  w.values = std::move(values);
  w.node_ids = std::move(node_ids);
  return w;
}

StandardizedMatrix standardize_rows(const MeasurementWindow& w, std::uint64_t noise_seed) {
  const long n = w.values.rows();
  const long t = w.values.cols();
  if (n < 2 || t < 2) throw ShapeError("standardize_rows: window too small");
  if (!w.values.allFinite()) throw DomainError("standardize_rows: non-finite entries");

  StandardizedMatrix out;
  out.values = w.values;
  out.node_ids = w.node_ids;
  out.t_start = w.t_start;
  out.t_end = w.t_end;

  std::vector<long> degenerate;
  for (long i = 0; i < n; ++i) {
    const double mean = out.values.row(i).mean();
    const double var =
        (out.values.row(i).array() - mean).square().sum() / static_cast<double>(t);
    if (var < kDegenerateVariance) degenerate.push_back(i);
  }
  if (static_cast<long>(degenerate.size()) == n) {
    throw AllRowsDegenerate("standardize_rows: every row is constant");
  }

  for (long i : degenerate) {
    GaussianStream g(mix_seed(noise_seed, static_cast<std::uint64_t>(i)));
    for (long j = 0; j < t; ++j) out.values(i, j) = g.next();
  }
  for (long i = 0; i < n; ++i) standardize_row(out.values.row(i));

  out.degenerate_rows = std::move(degenerate);
  return out;
}

ComplexMatrix haar_unitary(long n, std::uint64_t seed) {
  GaussianStream g(seed);
  ComplexMatrix gauss(n, n);
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < n; ++i) gauss(i, j) = g.next_complex();

  Eigen::HouseholderQR<ComplexMatrix> qr(gauss);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& qrm = qr.matrixQR();
  for (long j = 0; j < n; ++j) {
    const std::complex<double> r = qrm(j, j);
    const double mod = std::abs(r);
    q.col(j) *= (mod > 0.0) ? r / mod : std::complex<double>(1.0, 0.0);
  }
  return q;
}

ComplexMatrix singular_value_equivalent(const StandardizedMatrix& x, std::uint64_t rng_seed) {
  const long n = x.values.rows();
  const long t = x.values.cols();
  if (n > t) {
    throw ShapeError("singular_value_equivalent: needs N <= T, got " + std::to_string(n) +
                     "x" + std::to_string(t));
  }

  const Matrix gram = x.values * x.values.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("singular_value_equivalent: eigensolver failed");
  }
  Vector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix sqrt_gram =
      es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();

  return sqrt_gram.cast<std::complex<double>>() * haar_unitary(n, rng_seed);
}

RingMatrix ring_product(const std::vector<ComplexMatrix>& factors, double ratio,
                        long source_t) {
  if (factors.empty()) throw ShapeError("ring_product: empty factor list");
  const long n = factors.front().rows();
  for (const auto& f : factors) {
    if (f.rows() != n || f.cols() != n) {
      throw ShapeError("ring_product: factors must be square with equal size");
    }
  }
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw DomainError("ring_product: ratio must lie in (0, 1]");
  }

  ComplexMatrix z = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) z = z * factors[i];

  const double nn = static_cast<double>(n);
  for (long i = 0; i < n; ++i) {
    const std::complex<double> mean = z.row(i).mean();
    const double var = (z.row(i).array() - mean).abs2().sum() / nn;
    if (!(var > 0.0)) throw DomainError("ring_product: zero-variance row");
    z.row(i) /= std::sqrt(nn * var);
  }

  RingMatrix out;
  out.values = std::move(z);
  out.chain_length = static_cast<int>(factors.size());
  out.ratio = ratio;
  out.source_t = source_t > 0 ? source_t : std::lround(nn / ratio);
  return out;
}

RingMatrix ring_from_window(const MeasurementWindow& w, int chain_length,
                            std::uint64_t seed) {
  if (chain_length < 1) throw DomainError("ring_from_window: chain length must be >= 1");
  const StandardizedMatrix x = standardize_rows(w, mix_seed(seed, 0xD0));
  std::vector<ComplexMatrix> factors;
  factors.reserve(chain_length);
  for (int i = 0; i < chain_length; ++i) {
    factors.push_back(singular_value_equivalent(x, mix_seed(seed, 0xA0, i)));
  }
  const double ratio = static_cast<double>(w.values.rows()) / w.values.cols();
  return ring_product(factors, ratio, w.values.cols());
}

CovarianceMatrix sample_covariance(const StandardizedMatrix& x) {
  const long n = x.values.rows();
  const long t = x.values.cols();
  if (n > t) {
    throw ShapeError("sample_covariance: needs N <= T, got " + std::to_string(n) + "x" +
                     std::to_string(t));
  }
  Matrix m = (x.values * x.values.transpose()) / static_cast<double>(t);
  m = ((m + m.transpose()) * 0.5).eval();

  CovarianceMatrix out;
  out.values = m.cast<std::complex<double>>();
  out.ratio = static_cast<double>(n) / static_cast<double>(t);
  out.source_t = t;
  return out;
}

CovarianceMatrix covariance_from_window(const MeasurementWindow& w, std::uint64_t seed) {
  return sample_covariance(standardize_rows(w, mix_seed(seed, 0xD0)));
}

SpectralSample eigenvalues_general(const RingMatrix& m) {
  if (m.values.rows() != m.values.cols()) {
    throw ShapeError("eigenvalues_general: matrix must be square");
  }
  if (!m.values.allFinite()) throw DomainError("eigenvalues_general: non-finite entries");

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m.values, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eigenvalues_general: eigensolver did not converge");
  }

  SpectralSample s;
  s.kind = SampleKind::ring;
  s.n = m.values.rows();
  s.t = m.source_t;
  s.chain_length = m.chain_length;
  s.eigenvalues.assign(solver.eigenvalues().data(),
                       solver.eigenvalues().data() + solver.eigenvalues().size());
  sort_by_modulus(s.eigenvalues);
  return s;
}

SpectralSample eigenvalues_hermitian(const ComplexMatrix& a, long source_t) {
  if (a.rows() != a.cols()) throw ShapeError("eigenvalues_hermitian: matrix must be square");
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    throw DomainError("eigenvalues_hermitian: matrix is not Hermitian (max dev " +
                      std::to_string(asym) + ")");
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;
  solver.compute(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eigenvalues_hermitian: eigensolver did not converge");
  }

  SpectralSample s;
  s.kind = SampleKind::hermitian;
  s.n = a.rows();
  s.t = source_t;
  s.eigenvalues.reserve(a.rows());
  for (long i = 0; i < a.rows(); ++i) s.eigenvalues.emplace_back(solver.eigenvalues()[i], 0.0);
  return s;
}

SpectralSample eigenvalues_hermitian(const CovarianceMatrix& m) {
  SpectralSample s = eigenvalues_hermitian(m.values, m.source_t);
  s.kind = SampleKind::covariance;
  return s;
}

}  // namespace specstream
