// Copyright 2026 The Proxkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>

namespace proxkit {

/// Base class for all proxkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration: bad flags, missing files, inconsistent modes.
struct ConfigError : Error {
  using Error::Error;
};

/// Malformed or insufficient input data.
struct DataError : Error {
  using Error::Error;
};

/// Numeric failure: domain violation, singular system, divergence.
struct NumericError : Error {
  using Error::Error;
};

struct MalformedRow : DataError {
  using DataError::DataError;
};

struct NonNegativeRssi : DataError {
  using DataError::DataError;
};

struct EmptyFile : DataError {
  using DataError::DataError;
};

struct EmptySequence : DataError {
  using DataError::DataError;
};

struct LengthMismatch : DataError {
  using DataError::DataError;
};

struct InsufficientData : DataError {
  using DataError::DataError;
};

struct InvalidDistribution : DataError {
  using DataError::DataError;
};

struct DegenerateLabels : DataError {
  using DataError::DataError;
};

struct InfeasibleStratification : DataError {
  using DataError::DataError;
};

struct AllZeroWeights : DataError {
  using DataError::DataError;
};

struct DomainError : NumericError {
  using NumericError::NumericError;
};

struct InfiniteVariance : NumericError {
  using NumericError::NumericError;
};

struct SingularKernel : NumericError {
  using NumericError::NumericError;
};

}  // namespace proxkit
