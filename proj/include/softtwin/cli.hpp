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

#include <iosfwd>

namespace softtwin {

/// Entry point of the `softtwin` tool. Subcommands: simulate, montecarlo,
/// train, coordinate. Returns the process exit code:
///   0 ok, 1 internal, 2 usage, 3 configuration, 4 input out of range,
///   5 simulation failure, 6 I/O.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace softtwin
