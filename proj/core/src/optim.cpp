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
#include "augerino/optim.hpp"

#include <cmath>
#include <numbers>

#include "augerino/error.hpp"

namespace augerino {

double cosine_lr(double lr0, int epoch, int total) {
  if (total <= 0) throw DomainError("cosine_lr: total epochs must be positive");
  return lr0 * 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(epoch) / static_cast<double>(total)));
}

void sgd_cosine_update(std::span<Tensor> params, double lr0, int epoch, int total) {
  for (const auto& p : params) {
    if (!p.has_grad()) throw ContractError("sgd_cosine_update: parameter has no gradient");
  }
  const double lr = cosine_lr(lr0, epoch, total);
  for (auto& p : params) {
    auto v = p.mutable_values();
    auto g = p.grad();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= lr * g[i];
    p.zero_grad();
  }
}

Optimizer::Optimizer(OptimizerKind kind, std::vector<ParamGroup> groups) : kind_(kind), groups_(std::move(groups)) {
  if (kind_ == OptimizerKind::Adam) {
    for (const auto& grp : groups_) {
      auto& mg = m_.emplace_back();
      auto& vg = v_.emplace_back();
      for (const auto& p : grp.params) {
        mg.emplace_back(p.numel(), 0.0);
        vg.emplace_back(p.numel(), 0.0);
      }
    }
  }
}

void Optimizer::step(int epoch, int total_epochs) {
  if (kind_ == OptimizerKind::Sgd) {
    for (auto& grp : groups_) sgd_cosine_update(grp.params, grp.lr0, epoch, total_epochs);
    return;
  }
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  ++steps_;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(steps_));
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    auto& grp = groups_[gi];
    const double lr = cosine_lr(grp.lr0, epoch, total_epochs);
    for (std::size_t pi = 0; pi < grp.params.size(); ++pi) {
      auto& p = grp.params[pi];
      auto v = p.mutable_values();
      auto g = p.grad();
      auto& m1 = m_[gi][pi];
      auto& m2 = v_[gi][pi];
      for (std::size_t i = 0; i < v.size(); ++i) {
        m1[i] = beta1 * m1[i] + (1.0 - beta1) * g[i];
        m2[i] = beta2 * m2[i] + (1.0 - beta2) * g[i] * g[i];
        v[i] -= lr * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + eps);
      }
      p.zero_grad();
    }
  }
}

void Optimizer::zero_grad() {
  for (auto& grp : groups_)
    for (auto& p : grp.params) p.zero_grad();
}

}  // namespace augerino
