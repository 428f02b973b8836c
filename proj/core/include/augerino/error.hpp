// Copyright 2026 The Augerino Authors
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

namespace augerino {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand extents are incompatible with the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An integer index (label, generator id, ...) is out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Misuse of the gradient tape (stale tape, double backward, non-scalar loss).
class TapeError : public Error {
 public:
  using Error::Error;
};

/// A caller-side contract was violated (e.g. non-deterministic closure).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A forward computation produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid or incomplete experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed binary file (bad magic, inconsistent structure).
class FormatError : public Error {
 public:
  using Error::Error;
};

class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedError : public FormatError {
 public:
  using FormatError::FormatError;
};

class ChecksumError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Filesystem failure (unreadable or unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace augerino
