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

#include <cstddef>

#include "augerino/tensor.hpp"

namespace augerino {

/// Source sampling grid for a batch of affine transforms.
///
/// `g` is [3×3] or [B×3×3]; the result is [H×W×2] or [B×H×W×2]. Target pixel
/// (i, j) has normalized coordinates u = −1 + 2j/(W−1), v = −1 + 2i/(H−1)
/// (align-corners), and samples the source at g·(u, v, 1).
Tensor affine_grid(const Tensor& g, std::size_t height, std::size_t width);

/// Bilinear interpolation of `x` ([C×H×W] or [B×C×H×W]) at the grid's
/// normalized source coordinates. Locations outside the image read zero.
/// Differentiable with respect to both the image and the grid.
Tensor bilinear_sample(const Tensor& x, const Tensor& grid);

/// bilinear_sample(x, affine_grid(g, H, W)): output pixel p reads x at g·p.
Tensor warp(const Tensor& x, const Tensor& g);

}  // namespace augerino
