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
#include "augerino/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "augerino/error.hpp"

namespace augerino {
namespace {

double evaluate(const ScalarFn& f, const Tensor& x, std::vector<double> values) {
  reset_tape();
  const Tensor y = f(Tensor::from(x.shape(), std::move(values)));
  if (y.numel() != 1) throw DimensionError("grad_check: closure must return a scalar, got " + shape_str(y.shape()));
  return y.item();
}

}  // namespace

double grad_check(const ScalarFn& f, const Tensor& x, double step) {
  if (!(step > 0.0)) throw DomainError("grad_check: step must be positive");
  const std::vector<double> x0(x.values().begin(), x.values().end());

  reset_tape();
  Tensor leaf = Tensor::from(x.shape(), x0, true);
  const Tensor y = f(leaf);
  if (y.numel() != 1) throw DimensionError("grad_check: closure must return a scalar, got " + shape_str(y.shape()));
  const double y0 = y.item();
  backward(y);
  const std::vector<double> analytic(leaf.grad().begin(), leaf.grad().end());

  if (evaluate(f, x, x0) != y0) throw ContractError("grad_check: closure is not deterministic");

  double worst = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    auto plus = x0;
    auto minus = x0;
    plus[i] += step;
    minus[i] -= step;
    const double numeric = (evaluate(f, x, plus) - evaluate(f, x, minus)) / (2.0 * step);
    const double err = std::abs(analytic[i] - numeric) / std::max(1.0, std::abs(analytic[i]));
    worst = std::max(worst, err);
  }
  reset_tape();
  return worst;
}

}  // namespace augerino
