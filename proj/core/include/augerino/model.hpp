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
#include "augerino/network.hpp"
#include "augerino/optim.hpp"
#include "augerino/tensor.hpp"

namespace augerino {

enum class ModelMode {
  InvariantClassify,  // average class log-probabilities over transformed inputs
  Regress,            // average raw outputs
  Equivariant,        // average g⁻¹·f(g·x) per-pixel log-probability maps
};

std::string to_string(ModelMode mode);
ModelMode parse_model_mode(const std::string& name);

/// One mini-batch. Classification uses one label per image, segmentation one
/// label per pixel (negative = ignore), regression a [B×1] target tensor.
struct Batch {
  Tensor inputs;  // [B×C×H×W]
  std::vector<int> labels;
  Tensor targets;

  std::size_t size() const { return inputs.dim(0); }
};

/// The augmentation-averaged model f̄(x) = E_{g∼μθ} f_w(g·x).
struct AugerinoModel {
  Network network;
  GeneratorBasis basis = GeneratorBasis::affine2d();
  AugParams aug;
  /// Optional learned brightness and contrast ranges (inputs on a [0, 255] scale).
  bool color_aug = false;
  AugParams color;
  ModelMode mode = ModelMode::InvariantClassify;
  std::size_t n_copies_train = 1;
  std::size_t n_copies_test = 4;
  double lambda = 0.05;

  /// Number of uniform noise coordinates consumed per transformed copy.
  std::size_t eps_dim() const { return basis.size() + (color_aug ? 2 : 0); }
  std::vector<Tensor> aug_parameters() const;
  /// Throws ConfigError when mode, head and settings disagree.
  void validate() const;
};

/// Loss split into its data term and regularizer: total = data + λ·reg.
struct LossTerms {
  Tensor total;
  Tensor data;
  Tensor reg;
};

/// Regularized training loss with n_copies_train fresh ε-samples per datapoint.
LossTerms train_loss(const AugerinoModel& model, const Batch& batch, Rng& rng);
/// Same with explicit noise: `eps` is [B·copies × eps_dim], copies of one
/// datapoint on consecutive rows.
LossTerms train_loss(const AugerinoModel& model, const Batch& batch, const Tensor& eps, std::size_t copies);
/// Loss at explicitly supplied spatial widths θ (post-softplus) and λ.
LossTerms loss_at_widths(const AugerinoModel& model, const Batch& batch, const Tensor& widths, const Tensor& eps,
                         std::size_t copies, double lambda);

struct Prediction {
  Tensor output;            // averaged output ([B×C], [B×1] or [B×C×H×W])
  std::vector<int> labels;  // argmax per image or per pixel; empty for regression
};

/// Monte Carlo average over n_copies_test transformed copies of each input.
Prediction predict(const AugerinoModel& model, const Tensor& x, Rng& rng);
Prediction predict(const AugerinoModel& model, const Tensor& x, const Tensor& eps, std::size_t copies);

/// Equivariant average of g⁻¹·f(g·x), normalized by the in-frame coverage of
/// each inverse warp. Requires ModelMode::Equivariant.
Tensor predict_equivariant(const AugerinoModel& model, const Tensor& x, Rng& rng);
Tensor predict_equivariant(const AugerinoModel& model, const Tensor& x, const Tensor& eps, std::size_t copies);

struct StepMetrics {
  double loss = 0.0;
  double data_loss = 0.0;
  double reg = 0.0;
  std::vector<double> widths;
};

/// Optimizer with the network weights in one group and θ̃ in another.
Optimizer make_optimizer(const AugerinoModel& model, OptimizerKind kind, double lr, double aug_lr);

/// One iteration of joint training: sample transforms, average predictions,
/// evaluate the regularized loss, update w and θ̃.
StepMetrics training_step(AugerinoModel& model, const Batch& batch, Optimizer& optimizer, int epoch,
                          int total_epochs, Rng& rng);

}  // namespace augerino
