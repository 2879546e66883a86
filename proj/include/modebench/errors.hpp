// Copyright 2026 The modebench Authors
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

#ifndef MODEBENCH_ERRORS_HPP
#define MODEBENCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace modebench {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions that do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Root bracket without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value where a finite one is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration of a domain object.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// All importance weights vanished.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// File that cannot be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace modebench

#endif  // MODEBENCH_ERRORS_HPP
