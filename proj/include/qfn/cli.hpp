// Copyright 2026 The qfn developers
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

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace qfn {

/// Runs the command-line front end. `args` excludes the program name.
/// Model documents go to `out`; diagnostics (JSON with fields error,
/// message, block, smallest_pivot) go to `err`. Returns the process exit
/// code: 0 success, 2 for ill-posed / undefined / not-representable
/// reductions, 1 for every other failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

/// The documents written by the `examples` subcommand, as (filename, text)
/// pairs in normalized serialized form.
std::vector<std::pair<std::string, std::string>> bundled_examples();

}  // namespace qfn
