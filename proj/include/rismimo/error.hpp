// SPDX-License-Identifier: Apache-2.0
//
// rismimo: joint RIS phase optimization and Type-I precoder selection
// Copyright (C) 2026 The rismimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace rismimo {

// Base for every error raised by the library. The CLI maps ConfigError to
// exit code 2 and everything numerical to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scenario parameters, malformed input files, bad CLI arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operand shapes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Non-convergence, singular systems, rank deficiency.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rismimo
