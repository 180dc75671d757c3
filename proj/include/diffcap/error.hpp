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

#include <stdexcept>
#include <string>
#include <string_view>

namespace diffcap {

enum class ErrorKind {
  InvalidSetup,
  InvalidArgument,
  QuadratureNonconvergence,
  DecompositionFailure,
  PassivityViolation,
  Nonconvergence,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so front ends can map
/// it onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of a numerical procedure, as opposed to bad input.
  bool is_numerical() const noexcept {
    return kind_ != ErrorKind::InvalidSetup && kind_ != ErrorKind::InvalidArgument;
  }

 private:
  ErrorKind kind_;
};

}  // namespace diffcap
