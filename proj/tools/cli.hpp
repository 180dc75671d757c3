// SPDX-License-Identifier: Apache-2.0
//
// diffcap: classical capacities of diffraction-limited optical links
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

#include <iosfwd>

namespace diffcap::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,    // I/O and anything unexpected
  kExitInvalid = 2,    // bad flags, config or setup
  kExitNumerical = 3,  // quadrature, decomposition or solver failure
  kExitStrict = 4,     // --strict and a closed form outside its regime
};

/// Environment variable naming the default JSON config file.
inline constexpr const char* kConfigEnvVar = "DIFFRACTION_CHANNEL_CONFIG";

/// Runs the command line. Data goes to --output (or `out`), diagnostics to
/// `err`. Returns one of ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diffcap::cli
