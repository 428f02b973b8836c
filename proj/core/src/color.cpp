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
#include "augerino/color.hpp"

#include <algorithm>
#include <vector>

#include "augerino/error.hpp"

namespace augerino {
namespace {

constexpr double kMax = 255.0;

// Number of consecutive values sharing one t entry.
std::size_t values_per_t(const Tensor& x, const Tensor& t, const char* op) {
  if (t.numel() == 1) return x.numel();
  if (x.rank() == 4 && t.rank() == 1 && t.dim(0) == x.dim(0)) return x.dim(0) ? x.numel() / x.dim(0) : 0;
  throw DimensionError(std::string(op) + ": t of shape " + shape_str(t.shape()) + " does not match images " +
                       shape_str(x.shape()));
}

}  // namespace

double contrast_factor(double t) {
  if (!(t < 259.0)) throw DomainError("contrast: t must be below 259");
  return 259.0 * (t + 255.0) / (255.0 * (259.0 - t));
}

Tensor brightness_adjust(const Tensor& x, const Tensor& t) {
  const std::size_t per = values_per_t(x, t, "brightness_adjust");
  auto xv = x.values();
  auto tv = t.values();
  std::vector<double> out(x.numel());
  std::vector<unsigned char> live(x.numel());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = xv[i] + tv[per ? i / per : 0];
    live[i] = v >= 0.0 && v <= kMax;
    out[i] = std::clamp(v, 0.0, kMax);
  }
  return make_op_result("brightness_adjust", x.shape(), std::move(out), {x, t},
                        [x, t, per, live](std::span<const double> g) mutable {
                          if (x.requires_grad()) {
                            auto gx = x.mutable_grad();
                            for (std::size_t i = 0; i < g.size(); ++i)
                              if (live[i]) gx[i] += g[i];
                          }
                          if (t.requires_grad()) {
                            auto gt = t.mutable_grad();
                            for (std::size_t i = 0; i < g.size(); ++i)
                              if (live[i]) gt[i / per] += g[i];
                          }
                        });
}

Tensor contrast_adjust(const Tensor& x, const Tensor& t) {
  const std::size_t per = values_per_t(x, t, "contrast_adjust");
  auto tv = t.values();
  std::vector<double> factor(tv.size()), dfactor(tv.size());
  for (std::size_t i = 0; i < tv.size(); ++i) {
    factor[i] = contrast_factor(tv[i]);
    const double d = 259.0 - tv[i];
    dfactor[i] = 259.0 * 514.0 / (255.0 * d * d);
  }
  auto xv = x.values();
  std::vector<double> out(x.numel());
  std::vector<unsigned char> live(x.numel());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = xv[i] + (factor[per ? i / per : 0] - 1.0) * (xv[i] - 128.0);
    live[i] = v >= 0.0 && v <= kMax;
    out[i] = std::clamp(v, 0.0, kMax);
  }
  return make_op_result("contrast_adjust", x.shape(), std::move(out), {x, t},
                        [x, t, per, live, factor, dfactor](std::span<const double> g) mutable {
                          auto xv = x.values();
                          if (x.requires_grad()) {
                            auto gx = x.mutable_grad();
                            for (std::size_t i = 0; i < g.size(); ++i)
                              if (live[i]) gx[i] += g[i] * factor[i / per];
                          }
                          if (t.requires_grad()) {
                            auto gt = t.mutable_grad();
                            for (std::size_t i = 0; i < g.size(); ++i)
                              if (live[i]) gt[i / per] += g[i] * dfactor[i / per] * (xv[i] - 128.0);
                          }
                        });
}

}  // namespace augerino
