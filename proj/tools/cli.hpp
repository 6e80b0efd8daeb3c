// Copyright 2026 The ghznet Authors
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

#include <ostream>

namespace ghznet::cli {

/// Exit codes: 0 success, 1 computation failure, 2 invalid arguments.
enum ExitCode { exit_ok = 0, exit_computation = 1, exit_usage = 2 };

/// Entry point of the ghznet tool. Results go to `out` (or the --out file),
/// diagnostics and usage text to `err`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace ghznet::cli
