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

#include "augerino/tensor.hpp"

namespace augerino {

// Intensity transforms on the [0, 255] scale. `t` is a scalar tensor, or a [B]
// tensor holding one value per image of a [B×C×H×W] batch. Saturated outputs
// have zero gradient.

/// c' = max(min(c + t, 255), 0).
Tensor brightness_adjust(const Tensor& x, const Tensor& t);

/// c' = clamp(F(t)·(c − 128) + 128, 0, 255) with F(t) = 259(t + 255) / (255(259 − t)).
/// Throws DomainError for t ≥ 259.
Tensor contrast_adjust(const Tensor& x, const Tensor& t);

/// The contrast gain F(t).
double contrast_factor(double t);

}  // namespace augerino
