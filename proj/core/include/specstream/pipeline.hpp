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
#include <vector>

#include "specstream/types.hpp"

namespace specstream {

/// Standardizes each row to zero mean and unit variance with the population
/// denominator T. Constant rows (variance < 1e-12) are replaced by seeded
/// Gaussian noise, standardized, and flagged; throws AllRowsDegenerate when
/// there is no informative row at all.
StandardizedMatrix standardize_rows(const MeasurementWindow& w,
                                    std::uint64_t noise_seed = 0);

/// Haar-distributed random unitary: QR of a complex Gaussian matrix with the
/// R diagonal phases folded into Q.
ComplexMatrix haar_unitary(long n, std::uint64_t seed);

/// Square complex matrix sharing the singular values of the rectangular input
/// (tolerance 1e-8 relative): sqrt(X Xᵀ) rotated by a seeded Haar unitary.
/// Requires N <= T.
ComplexMatrix singular_value_equivalent(const StandardizedMatrix& x,
                                        std::uint64_t rng_seed);

/// Product of L square singular-value equivalents, each row then scaled by
/// 1/(sqrt(N) * sd(row)) so every row of the result has variance 1/N.
/// `ratio` records the aspect ratio c = N/T of the source windows.
RingMatrix ring_product(const std::vector<ComplexMatrix>& factors, double ratio,
                        long source_t = 0);

/// Full window-to-ring chain: standardize, build L singular-value
/// equivalents with seeds derived from `seed`, multiply, row-scale.
RingMatrix ring_from_window(const MeasurementWindow& w, int chain_length,
                            std::uint64_t seed);

/// Sample covariance M = (1/T) X Xᵀ of a standardized window; Hermitian and
/// positive semidefinite with ratio c = N/T. Requires N <= T.
CovarianceMatrix sample_covariance(const StandardizedMatrix& x);

/// Covariance matrix in one step from a raw window.
CovarianceMatrix covariance_from_window(const MeasurementWindow& w,
                                        std::uint64_t seed);

/// All N complex eigenvalues of a ring matrix, sorted by modulus.
SpectralSample eigenvalues_general(const RingMatrix& m);

/// All N real eigenvalues of a Hermitian covariance matrix, ascending.
SpectralSample eigenvalues_hermitian(const CovarianceMatrix& m);

/// Ascending eigenvalues of an arbitrary Hermitian matrix (kind: hermitian).
SpectralSample eigenvalues_hermitian(const ComplexMatrix& a, long source_t = 0);

}  // namespace specstream
