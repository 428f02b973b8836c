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
#include "augerino/network.hpp"

#include <cmath>

#include "augerino/error.hpp"
#include "augerino/ops.hpp"

namespace augerino {

std::string to_string(NetworkKind kind) {
  switch (kind) {
    case NetworkKind::CnnSmall:
      return "cnn-small";
    case NetworkKind::Mlp:
      return "mlp";
    case NetworkKind::Fcn:
      return "fcn";
  }
  return "?";
}

NetworkKind parse_network_kind(const std::string& name) {
  if (name == "cnn-small") return NetworkKind::CnnSmall;
  if (name == "mlp") return NetworkKind::Mlp;
  if (name == "fcn") return NetworkKind::Fcn;
  throw ConfigError("unknown network kind '" + name + "'");
}

std::size_t NetworkSpec::cnn_feature_side() const {
  std::size_t s = input_size;
  s = (s - 1) / 2 + 1;  // stride-2 layer, pad 1
  s = (s - 1) / 2 + 1;
  return s;
}

void NetworkSpec::validate() const {
  if (input_channels == 0 && kind != NetworkKind::Mlp) throw ConfigError("network: input_channels must be positive");
  if (input_size == 0) throw ConfigError("network: input_size must be positive");
  if (output_dim == 0) throw ConfigError("network: output_dim must be positive");
  for (auto w : widths) {
    if (w == 0) throw ConfigError("network: layer widths must be positive");
  }
  switch (kind) {
    case NetworkKind::CnnSmall:
      if (widths.size() != 4) throw ConfigError("network: cnn-small takes exactly 4 channel widths");
      if (hidden == 0) throw ConfigError("network: cnn-small hidden width must be positive");
      break;
    case NetworkKind::Fcn:
      if (widths.empty()) throw ConfigError("network: fcn needs at least one conv layer");
      break;
    case NetworkKind::Mlp:
      break;
  }
  if (head == OutputHead::LogProbabilities && output_dim < 2) {
    throw ConfigError("network: a log-probability head needs at least 2 outputs");
  }
}

std::vector<Shape> Network::parameter_shapes() const {
  std::vector<Shape> shapes;
  const auto& s = spec_;
  switch (s.kind) {
    case NetworkKind::CnnSmall: {
      std::size_t cin = s.input_channels;
      for (auto c : s.widths) {
        shapes.push_back({c, cin, 3, 3});
        shapes.push_back({c});
        cin = c;
      }
      const std::size_t side = s.cnn_feature_side();
      const std::size_t flat = cin * side * side;
      shapes.push_back({s.hidden, flat});
      shapes.push_back({s.hidden});
      shapes.push_back({s.output_dim, s.hidden});
      shapes.push_back({s.output_dim});
      break;
    }
    case NetworkKind::Fcn: {
      std::size_t cin = s.input_channels;
      for (auto c : s.widths) {
        shapes.push_back({c, cin, 3, 3});
        shapes.push_back({c});
        cin = c;
      }
      shapes.push_back({s.output_dim, cin, 3, 3});
      shapes.push_back({s.output_dim});
      break;
    }
    case NetworkKind::Mlp: {
      std::size_t in = s.input_size;
      for (auto w : s.widths) {
        shapes.push_back({w, in});
        shapes.push_back({w});
        in = w;
      }
      shapes.push_back({s.output_dim, in});
      shapes.push_back({s.output_dim});
      break;
    }
  }
  return shapes;
}

Network Network::build(const NetworkSpec& spec, Rng& rng) {
  spec.validate();
  Network net;
  net.spec_ = spec;
  const auto shapes = net.parameter_shapes();
  std::size_t fan_in = 1;
  for (const auto& shape : shapes) {
    const bool is_weight = shape.size() > 1;
    if (is_weight) fan_in = shape_numel(shape) / shape[0];
    const double bound = is_weight ? std::sqrt(6.0 / static_cast<double>(fan_in))
                                   : 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<double> v(shape_numel(shape));
    for (auto& x : v) x = dist(rng);
    net.params_.push_back(Tensor::from(shape, std::move(v), true));
  }
  return net;
}

Network Network::from_parameters(const NetworkSpec& spec, std::vector<Tensor> params) {
  spec.validate();
  Network net;
  net.spec_ = spec;
  const auto shapes = net.parameter_shapes();
  if (shapes.size() != params.size()) throw DimensionError("network: wrong number of parameter tensors");
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (params[i].shape() != shapes[i]) {
      throw DimensionError("network: parameter " + std::to_string(i) + " has shape " +
                           shape_str(params[i].shape()) + ", expected " + shape_str(shapes[i]));
    }
    params[i].set_requires_grad(true);
  }
  net.params_ = std::move(params);
  return net;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.numel();
  return n;
}

Tensor Network::forward(const Tensor& x) const {
  const auto& s = spec_;
  const auto& p = params_;
  if (s.kind == NetworkKind::Mlp) {
    Tensor h = x;
    if (x.rank() == 1) h = reshape(x, {1, x.numel()});
    if (h.rank() != 2) h = reshape(h, {h.dim(0), h.numel() / std::max<std::size_t>(1, h.dim(0))});
    if (h.dim(1) != s.input_size) {
      throw DimensionError("network: mlp expects " + std::to_string(s.input_size) + " features, got " +
                           shape_str(x.shape()));
    }
    const std::size_t layers = s.widths.size();
    for (std::size_t l = 0; l < layers; ++l) h = relu(linear(h, p[2 * l], p[2 * l + 1]));
    h = linear(h, p[2 * layers], p[2 * layers + 1]);
    return s.head == OutputHead::LogProbabilities ? log_softmax(h) : h;
  }

  Tensor h = x.rank() == 3 ? reshape(x, {1, x.dim(0), x.dim(1), x.dim(2)}) : x;
  if (h.rank() != 4 || h.dim(1) != s.input_channels || h.dim(2) != s.input_size || h.dim(3) != s.input_size) {
    throw DimensionError("network: expected input [N×" + std::to_string(s.input_channels) + "×" +
                         std::to_string(s.input_size) + "×" + std::to_string(s.input_size) + "], got " +
                         shape_str(x.shape()));
  }
  if (s.kind == NetworkKind::CnnSmall) {
    static constexpr int strides[4] = {1, 2, 1, 2};
    for (std::size_t l = 0; l < 4; ++l) h = relu(add_channel_bias(conv2d(h, p[2 * l], strides[l], 1), p[2 * l + 1]));
    const std::size_t n = h.dim(0);
    h = reshape(h, {n, h.numel() / n});
    h = relu(linear(h, p[8], p[9]));
    h = linear(h, p[10], p[11]);
    return s.head == OutputHead::LogProbabilities ? log_softmax(h) : h;
  }
  // fcn
  const std::size_t layers = s.widths.size();
  for (std::size_t l = 0; l < layers; ++l) h = relu(add_channel_bias(conv2d(h, p[2 * l], 1, 1), p[2 * l + 1]));
  h = add_channel_bias(conv2d(h, p[2 * layers], 1, 1), p[2 * layers + 1]);
  return s.head == OutputHead::LogProbabilities ? log_softmax(h) : h;
}

}  // namespace augerino
