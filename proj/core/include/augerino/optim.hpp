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

#include <span>
#include <vector>

#include "augerino/tensor.hpp"

namespace augerino {

/// Cosine-annealed learning rate: lr0 · ½(1 + cos(π·epoch/total)).
double cosine_lr(double lr0, int epoch, int total);

/// Plain SGD step p ← p − lr(epoch)·∇p on every tensor, then clears the
/// gradients. Throws ContractError when a tensor carries no gradient.
void sgd_cosine_update(std::span<Tensor> params, double lr0, int epoch, int total);

enum class OptimizerKind { Sgd, Adam };

/// A set of tensors sharing one base learning rate.
struct ParamGroup {
  std::vector<Tensor> params;
  double lr0 = 0.01;
};

/// Joint optimizer over several parameter groups, each following the cosine
/// schedule from its own base rate. Adam keeps per-element moments.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, std::vector<ParamGroup> groups);

  /// Applies one update at the given epoch and clears the gradients.
  void step(int epoch, int total_epochs);
  void zero_grad();

  OptimizerKind kind() const { return kind_; }
  const std::vector<ParamGroup>& groups() const { return groups_; }

 private:
  OptimizerKind kind_;
  std::vector<ParamGroup> groups_;
  std::vector<std::vector<std::vector<double>>> m_, v_;
  long steps_ = 0;
};

}  // namespace augerino
