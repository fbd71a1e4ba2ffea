// Copyright 2026 The ncfisher Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ncf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation point inside a spectral support, or a spike that fails its
// phase condition.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation point sits on an atom of a discrete measure.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InsufficientDataError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

// A solver converged to a root that fails a consistency check.
class BranchError : public Error {
 public:
  using Error::Error;
};

class NumericalRankError : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncf
