// Copyright 2026 The memloco Authors
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
#include <string>

namespace mloc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions, unknown keys, malformed configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A value that violates a domain invariant (parameter ranges, non-physical models).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite activations, gradients or losses.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation's preconditions.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or incompatible files.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace mloc
