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
#include <string>
#include <vector>

#include "augerino/lie.hpp"
#include "augerino/tensor.hpp"

namespace augerino {

enum class NetworkKind {
  CnnSmall,  // 4 conv layers (two of stride 2) + 2 dense layers
  Mlp,       // dense layers on flattened input
  Fcn,       // stride-1 conv stack + per-pixel output conv
};

enum class OutputHead { LogProbabilities, Linear };

std::string to_string(NetworkKind kind);
NetworkKind parse_network_kind(const std::string& name);

struct NetworkSpec {
  NetworkKind kind = NetworkKind::CnnSmall;
  std::size_t input_channels = 1;
  /// Image side (H = W) for cnn-small and fcn; number of features for mlp.
  std::size_t input_size = 16;
  /// Conv channels (cnn-small needs 4, fcn any) or hidden widths (mlp).
  std::vector<std::size_t> widths{8, 16, 16, 32};
  /// Dense width between the conv stack and the output layer (cnn-small).
  std::size_t hidden = 32;
  std::size_t output_dim = 4;
  OutputHead head = OutputHead::LogProbabilities;

  /// Throws ConfigError on an unusable combination.
  void validate() const;
  /// Extent of the cnn-small feature map after the conv stack.
  std::size_t cnn_feature_side() const;

  bool operator==(const NetworkSpec&) const = default;
};

/// A small feed-forward network f_w whose weights are leaves with
/// requires_grad set.
class Network {
 public:
  Network() = default;

  /// Weights ~ U(±√(6/fan_in)), biases ~ U(±1/√fan_in).
  static Network build(const NetworkSpec& spec, Rng& rng);
  /// Rebuilds a network from stored parameters (shapes are checked).
  static Network from_parameters(const NetworkSpec& spec, std::vector<Tensor> params);

  /// Forward pass on the current tape. Image nets take [N×C×H×W] (or a single
  /// [C×H×W]); the mlp also accepts images and flattens them.
  Tensor forward(const Tensor& x) const;

  const NetworkSpec& spec() const { return spec_; }
  std::vector<Tensor>& parameters() { return params_; }
  const std::vector<Tensor>& parameters() const { return params_; }
  std::size_t parameter_count() const;

 private:
  std::vector<Shape> parameter_shapes() const;

  NetworkSpec spec_;
  std::vector<Tensor> params_;
};

}  // namespace augerino
