// Copyright 2026 The Augerino Authors
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

#include <functional>

#include "augerino/tensor.hpp"

namespace augerino {

using ScalarFn = std::function<Tensor(const Tensor&)>;

/// Compares the reverse-mode gradient of a scalar closure at `x` against
/// central finite differences with the given step.
///
/// Returns max_i |analytic_i − numeric_i| / max(1, |analytic_i|). Throws
/// ContractError when two evaluations at `x` disagree. Resets the calling
/// thread's tape.
double grad_check(const ScalarFn& f, const Tensor& x, double step);

}  // namespace augerino
