// Copyright 2026 The hyperecp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>

namespace hyperecp::verify {

struct Options {
  // Binary exercised by the determinism criterion (the CLI passes itself).
  std::string cli_exe;
};

// Runs the full verification suite, one [PASS]/[FAIL] line per criterion,
// and returns the number of failed criteria.
int run_acceptance(std::ostream& os, const Options& opt);

}  // namespace hyperecp::verify
