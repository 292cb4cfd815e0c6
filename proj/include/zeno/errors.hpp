// Copyright 2026 The zeno-lab authors
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

namespace zeno {

/// Base class for all domain errors thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two states (or a state and an operator) have incompatible shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation that requires a nonzero state was given a (near-)zero vector.
class ZeroNormError : public Error {
 public:
  using Error::Error;
};

/// Arithmetic produced something inconsistent: non-finite amplitudes, a
/// negative metric radicand beyond roundoff, a probability outside [0,1].
class NumericsError : public Error {
 public:
  using Error::Error;
};

/// Time integration blew up; the message names the failing step.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Requested combination is not supported (wrong stepper for a model,
/// non-autonomous protocol, ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Grid cannot hold the requested state (soliton tails exceed the boundary).
class GridError : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration rejected; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace zeno
