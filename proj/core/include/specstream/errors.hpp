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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specstream {

// Base type for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix dimensions incompatible with the requested operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Scalar argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Every row of the window is constant; standardization is undefined.
class AllRowsDegenerate : public Error {
 public:
  using Error::Error;
};

// Underlying eigensolver or iterative routine failed to converge.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

// The requested law has no closed-form CDF for this operation.
class UnsupportedLaw : public Error {
 public:
  using Error::Error;
};

// Evaluation point lies outside the interior interval of the envelope bound.
class EdgeRegion : public Error {
 public:
  using Error::Error;
};

// Reference mean or variance degenerate (zero) for normalization.
class DegenerateReference : public Error {
 public:
  using Error::Error;
};

// Stream shorter than one analysis window.
class StreamTooShort : public Error {
 public:
  using Error::Error;
};

// Requested sample delay exceeds half the stream length.
class DelayTooLarge : public Error {
 public:
  using Error::Error;
};

// CSV cell could not be parsed; carries 1-based file coordinates.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row_(row), col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_ = 0;
  std::size_t col_ = 0;
};

// Rows of a CSV file disagree on the number of cells.
class NonRectangular : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace specstream
