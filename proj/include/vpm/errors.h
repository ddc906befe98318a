// Copyright 2026 The vpm Authors
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

#include <stdexcept>

namespace vpm {

/// Raised when an iterative routine fails to converge or a numerical
/// precondition (finiteness, identifiability) is violated.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised for malformed user input: probe files, noise specs, sweep configs.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace vpm
