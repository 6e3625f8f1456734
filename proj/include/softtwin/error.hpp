// Copyright 2026 The softtwin Authors
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
#include <string_view>

namespace softtwin {

enum class ErrorKind {
  InvalidParameter,
  CommandRange,
  NumericFault,
  Configuration,
  DegenerateDistribution,
  Horizon,
  Calibration,
  NotApplicable,
  InvalidArgument,
  Index,
  Io,
  Parse,
  Lifecycle,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a category so callers (the
/// CLI in particular) can map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class HorizonError : public Error {
 public:
  HorizonError(std::size_t trial, const std::string& what)
      : Error(ErrorKind::Horizon, what), trial_(trial) {}

  std::size_t trial() const noexcept { return trial_; }

 private:
  std::size_t trial_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace softtwin
