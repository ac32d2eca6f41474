// Copyright 2026 The lgst developers
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

namespace lgst {

/// Measurement branch with (numerically) zero probability; no post-state exists.
struct zero_probability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Data that parses fine but breaks a declared invariant (normalization,
/// two-route consistency, quantum bounds).
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lgst
