// Copyright 2026 The rffq Authors
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

#include <stdexcept>
#include <string>

namespace rffq {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (bad index, wrong shape, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Requested matrix dimension exceeds the configured ceiling.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine did not converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A construction produced something that violates its own invariants.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// User-supplied data (state, POVM, coupling matrix) failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace rffq
