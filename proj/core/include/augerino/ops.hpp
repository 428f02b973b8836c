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
#include <span>
#include <vector>

#include "augerino/tensor.hpp"

namespace augerino {

// Linear algebra --------------------------------------------------------------

/// [m×k]·[k×n] → [m×n].
Tensor matmul(const Tensor& a, const Tensor& b);
/// Batched product [B×m×k]·[B×k×n] → [B×m×n].
Tensor bmm(const Tensor& a, const Tensor& b);
/// Transpose of a rank-2 tensor.
Tensor transpose(const Tensor& a);
/// x[N×in]·wᵀ + b with w[out×in], b[out] → [N×out].
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

// Convolution -----------------------------------------------------------------

/// 3×3 cross-correlation. `x` is [C×H×W] or [N×C×H×W], `k` is [Co×C×3×3].
/// Output extents are (H + 2·pad − 3)/stride + 1. stride ∈ {1,2}, pad ∈ {0,1}.
Tensor conv2d(const Tensor& x, const Tensor& k, int stride, int pad);
/// Adds b[c] to every element of channel c (axis 1 for rank ≥ 2).
Tensor add_channel_bias(const Tensor& x, const Tensor& b);

// Elementwise -----------------------------------------------------------------

/// max(x, 0); the subgradient at 0 is 0.
Tensor relu(const Tensor& x);
Tensor add_const(const Tensor& x, double c);
Tensor scale_const(const Tensor& x, double c);
Tensor add(const Tensor& x, const Tensor& y);
Tensor sub(const Tensor& x, const Tensor& y);
Tensor mul(const Tensor& x, const Tensor& y);
Tensor square(const Tensor& x);
/// log(1 + exp(x)), evaluated without overflow.
Tensor softplus(const Tensor& x);

// Shape and reduction ---------------------------------------------------------

Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
Tensor reshape(const Tensor& x, Shape shape);
/// x[N×k] scaled column-wise by v[k].
Tensor scale_columns(const Tensor& x, const Tensor& v);
/// Rows of x (along axis 0) selected by `rows`; indices may repeat.
Tensor gather_rows(const Tensor& x, std::span<const std::size_t> rows);
/// Mean over consecutive groups of `group` rows along axis 0:
/// [N·group × ...] → [N × ...].
Tensor group_mean(const Tensor& x, std::size_t group);

// Losses ----------------------------------------------------------------------

/// Log-softmax over axis 1 of a [B×C] or [B×C×H×W] tensor, with max-subtraction.
Tensor log_softmax(const Tensor& z);
/// −mean_i logp[i, labels[i]]. Linear in logp.
Tensor nll_from_logprob(const Tensor& logp, std::span<const int> labels);
/// Per-pixel nll over [B×C×H×W] log-probabilities. `labels` holds B·H·W class
/// ids; negative ids are ignored. The mean runs over counted pixels only.
Tensor masked_pixel_nll(const Tensor& logp, std::span<const int> labels);
/// Mean of squared differences.
Tensor mse_loss(const Tensor& pred, const Tensor& target);

}  // namespace augerino
