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

#include <string>
#include <vector>

namespace diffcap {

/// Shortest decimal that parses back to exactly `value`. Throws
/// InvalidArgument for NaN and infinities.
std::string format_double(double value);

/// CSV with a header row, `,` separators and LF line endings. Every row
/// must have as many cells as the header.
std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

}  // namespace diffcap
