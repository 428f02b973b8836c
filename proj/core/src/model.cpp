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
#include "augerino/model.hpp"

#include <algorithm>
#include <cmath>

#include "augerino/color.hpp"
#include "augerino/error.hpp"
#include "augerino/ops.hpp"
#include "augerino/warp.hpp"

namespace augerino {

std::string to_string(ModelMode mode) {
  switch (mode) {
    case ModelMode::InvariantClassify:
      return "invariant-classify";
    case ModelMode::Regress:
      return "regress";
    case ModelMode::Equivariant:
      return "equivariant";
  }
  return "invariant-classify";
}

ModelMode parse_model_mode(const std::string& name) {
  if (name == "invariant-classify") return ModelMode::InvariantClassify;
  if (name == "regress") return ModelMode::Regress;
  if (name == "equivariant") return ModelMode::Equivariant;
  throw ConfigError("unknown model mode '" + name + "'");
}

std::vector<Tensor> AugerinoModel::aug_parameters() const {
  std::vector<Tensor> out{aug.theta_raw};
  if (color_aug) out.push_back(color.theta_raw);
  return out;
}

void AugerinoModel::validate() const {
  network.spec().validate();
  if (n_copies_train == 0 || n_copies_test == 0) throw ConfigError("model: n_copies must be at least 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("model: lambda must be finite and ≥ 0");
  if (basis.dim != 3) throw ConfigError("model: image models need a 2D (3×3) generator basis");
  if (aug.size() != basis.size() || aug.mask.size() != basis.size()) {
    throw ConfigError("model: augmentation parameters do not match the generator basis");
  }
  if (color_aug && (color.size() != 2 || color.mask.size() != 2)) {
    throw ConfigError("model: color augmentation takes brightness and contrast widths");
  }
  const bool logprob = network.spec().head == OutputHead::LogProbabilities;
  switch (mode) {
    case ModelMode::InvariantClassify:
      if (!logprob) throw ConfigError("model: classification needs a log-probability head");
      if (network.spec().kind == NetworkKind::Fcn) throw ConfigError("model: classification needs a per-image network");
      break;
    case ModelMode::Regress:
      if (logprob) throw ConfigError("model: regression needs a linear head");
      if (network.spec().kind == NetworkKind::Fcn) throw ConfigError("model: regression needs a per-image network");
      break;
    case ModelMode::Equivariant:
      if (network.spec().kind != NetworkKind::Fcn) throw ConfigError("model: equivariant mode needs the fcn network");
      break;
  }
}

namespace {

struct Transformed {
  Tensor inputs;    // [B·copies × C × H × W]
  Tensor spatial;   // [B·copies × k] noise for the spatial generators
};

std::vector<std::size_t> replicate_index(std::size_t batch, std::size_t copies) {
  std::vector<std::size_t> idx(batch * copies);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i / copies;
  return idx;
}

Tensor eps_columns(const Tensor& eps, std::size_t first, std::size_t count) {
  const std::size_t rows = eps.dim(0);
  const std::size_t cols = eps.dim(1);
  std::vector<double> out(rows * count);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < count; ++c) out[r * count + c] = eps.at(r * cols + first + c);
  }
  return Tensor::from({rows, count}, std::move(out));
}

// Column c of x[N×m] as an [N] tensor.
Tensor column(const Tensor& x, std::size_t c) {
  const std::size_t row = c;
  const Tensor t = transpose(x);
  return reshape(gather_rows(t, std::span<const std::size_t>(&row, 1)), {x.dim(0)});
}

void check_inputs(const AugerinoModel& model, const Tensor& x) {
  if (x.rank() != 4) throw DimensionError("model: inputs must be [B×C×H×W], got " + shape_str(x.shape()));
  if (x.dim(0) == 0) throw DimensionError("model: empty batch");
  (void)model;
}

void check_eps(const AugerinoModel& model, const Tensor& eps, std::size_t batch, std::size_t copies) {
  if (copies == 0) throw ContractError("model: copies must be at least 1");
  if (eps.rank() != 2 || eps.dim(0) != batch * copies || eps.dim(1) != model.eps_dim()) {
    throw DimensionError("model: expected eps of shape [" + std::to_string(batch * copies) + ", " +
                         std::to_string(model.eps_dim()) + "], got " + shape_str(eps.shape()));
  }
}

// Replicates every input `copies` times, applies g_ε and the optional color
// transforms row by row.
Transformed transform_copies(const AugerinoModel& model, const Tensor& x, const Tensor& widths, const Tensor& eps,
                             std::size_t copies) {
  check_inputs(model, x);
  check_eps(model, eps, x.dim(0), copies);
  const std::size_t k = model.basis.size();
  const auto idx = replicate_index(x.dim(0), copies);
  Transformed t;
  t.spatial = eps_columns(eps, 0, k);
  const Tensor xr = copies == 1 ? x : gather_rows(x, idx);
  t.inputs = warp(xr, sample_affine(widths, model.basis, t.spatial));
  if (model.color_aug) {
    const Tensor shifts = scale_const(scale_columns(eps_columns(eps, k, 2), model.color.widths()), 255.0);
    t.inputs = brightness_adjust(t.inputs, column(shifts, 0));
    t.inputs = contrast_adjust(t.inputs, column(shifts, 1));
  }
  return t;
}

Tensor combined_regularizer(const AugerinoModel& model, const Tensor& widths) {
  Tensor reg = regularizer_neg_l2(widths);
  if (model.color_aug) reg = add(reg, regularizer_neg_l2(model.color.widths()));
  return reg;
}

Tensor replicate_targets(const Tensor& targets, std::size_t copies) {
  if (copies == 1) return targets;
  return gather_rows(targets, replicate_index(targets.dim(0), copies));
}

// Coverage-weighted average of g⁻¹·y over the copies of each input. Pixels no
// inverse warp maps back inside the frame get value 0 and coverage 0.
struct EquivariantAverage {
  Tensor output;              // [B×C×H×W]
  std::vector<double> coverage;  // [B·H·W]
};

EquivariantAverage equivariant_average(const AugerinoModel& model, const Tensor& y, const Tensor& widths,
                                       const Tensor& spatial, std::size_t copies, const Shape& in_shape) {
  if (y.rank() != 4 || y.dim(2) != in_shape[2] || y.dim(3) != in_shape[3]) {
    throw DimensionError("predict_equivariant: network output " + shape_str(y.shape()) +
                         " does not keep the input extents " + shape_str(in_shape));
  }
  const std::size_t n = y.dim(0);
  const std::size_t c = y.dim(1);
  const std::size_t h = y.dim(2);
  const std::size_t w = y.dim(3);
  const std::size_t b = n / copies;
  const Tensor ginv = inverse_of_sample(widths, model.basis, spatial);
  const Tensor back = group_mean(warp(y, ginv), copies);

  std::vector<double> cov_vals;
  {
    NoGradScope no_grad;
    const Tensor ones = Tensor::full({n, 1, h, w}, 1.0);
    const Tensor cov = group_mean(warp(ones, ginv.detach()), copies);
    cov_vals.assign(cov.values().begin(), cov.values().end());
  }
  std::vector<double> scale(b * c * h * w, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      for (std::size_t p = 0; p < h * w; ++p) {
        const double cv = cov_vals[i * h * w + p];
        scale[(i * c + ch) * h * w + p] = cv > 1e-9 ? 1.0 / cv : 0.0;
      }
    }
  }
  EquivariantAverage out;
  out.output = mul(back, Tensor::from({b, c, h, w}, std::move(scale)));
  out.coverage = std::move(cov_vals);
  return out;
}

std::vector<int> argmax_rows(const Tensor& out) {
  const std::size_t rows = out.dim(0);
  const std::size_t cols = out.dim(1);
  std::vector<int> labels(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < cols; ++c) {
      if (out.at(r * cols + c) > out.at(r * cols + best)) best = c;
    }
    labels[r] = static_cast<int>(best);
  }
  return labels;
}

std::vector<int> argmax_pixels(const Tensor& out) {
  const std::size_t b = out.dim(0);
  const std::size_t c = out.dim(1);
  const std::size_t hw = out.dim(2) * out.dim(3);
  std::vector<int> labels(b * hw);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t p = 0; p < hw; ++p) {
      std::size_t best = 0;
      for (std::size_t ch = 1; ch < c; ++ch) {
        if (out.at((i * c + ch) * hw + p) > out.at((i * c + best) * hw + p)) best = ch;
      }
      labels[i * hw + p] = static_cast<int>(best);
    }
  }
  return labels;
}

}  // namespace

LossTerms loss_at_widths(const AugerinoModel& model, const Batch& batch, const Tensor& widths, const Tensor& eps,
                         std::size_t copies, double lambda) {
  const std::size_t b = batch.size();
  const Transformed t = transform_copies(model, batch.inputs, widths, eps, copies);
  const Tensor y = model.network.forward(t.inputs);
  LossTerms terms;
  switch (model.mode) {
    case ModelMode::InvariantClassify:
      if (batch.labels.size() != b) {
        throw DimensionError("train_loss: " + std::to_string(b) + " inputs but " +
                             std::to_string(batch.labels.size()) + " labels");
      }
      terms.data = nll_from_logprob(group_mean(y, copies), batch.labels);
      break;
    case ModelMode::Regress:
      if (batch.targets.rank() != 2 || batch.targets.dim(0) != b || batch.targets.dim(1) != y.dim(1)) {
        throw DimensionError("train_loss: targets of shape " + shape_str(batch.targets.shape()) +
                             " do not match outputs " + shape_str(y.shape()));
      }
      terms.data = mse_loss(y, replicate_targets(batch.targets, copies));
      break;
    case ModelMode::Equivariant: {
      if (model.network.spec().head != OutputHead::LogProbabilities) {
        throw ContractError("train_loss: equivariant training needs a log-probability head");
      }
      const std::size_t hw = batch.inputs.dim(2) * batch.inputs.dim(3);
      if (batch.labels.size() != b * hw) {
        throw DimensionError("train_loss: expected " + std::to_string(b * hw) + " pixel labels, got " +
                             std::to_string(batch.labels.size()));
      }
      const EquivariantAverage avg = equivariant_average(model, y, widths, t.spatial, copies, batch.inputs.shape());
      std::vector<int> labels = batch.labels;
      for (std::size_t p = 0; p < labels.size(); ++p) {
        if (avg.coverage[p] <= 1e-9) labels[p] = -1;
      }
      terms.data = masked_pixel_nll(avg.output, labels);
      break;
    }
  }
  terms.reg = combined_regularizer(model, widths);
  terms.total = add(terms.data, scale_const(terms.reg, lambda));
  return terms;
}

LossTerms train_loss(const AugerinoModel& model, const Batch& batch, const Tensor& eps, std::size_t copies) {
  return loss_at_widths(model, batch, model.aug.widths(), eps, copies, model.lambda);
}

LossTerms train_loss(const AugerinoModel& model, const Batch& batch, Rng& rng) {
  if (batch.inputs.rank() == 0 || batch.size() == 0) throw DimensionError("train_loss: empty batch");
  const Tensor eps = sample_eps(rng, batch.size() * model.n_copies_train, model.eps_dim());
  return train_loss(model, batch, eps, model.n_copies_train);
}

Prediction predict(const AugerinoModel& model, const Tensor& x, const Tensor& eps, std::size_t copies) {
  const Tensor widths = model.aug.widths();
  const Transformed t = transform_copies(model, x, widths, eps, copies);
  const Tensor y = model.network.forward(t.inputs);
  Prediction p;
  if (model.mode == ModelMode::Equivariant) {
    p.output = equivariant_average(model, y, widths, t.spatial, copies, x.shape()).output;
    p.labels = argmax_pixels(p.output);
    return p;
  }
  p.output = group_mean(y, copies);
  if (model.mode == ModelMode::InvariantClassify) p.labels = argmax_rows(p.output);
  return p;
}

Prediction predict(const AugerinoModel& model, const Tensor& x, Rng& rng) {
  check_inputs(model, x);
  const Tensor eps = sample_eps(rng, x.dim(0) * model.n_copies_test, model.eps_dim());
  return predict(model, x, eps, model.n_copies_test);
}

Tensor predict_equivariant(const AugerinoModel& model, const Tensor& x, const Tensor& eps, std::size_t copies) {
  if (model.mode != ModelMode::Equivariant) throw ContractError("predict_equivariant: model is not equivariant");
  return predict(model, x, eps, copies).output;
}

Tensor predict_equivariant(const AugerinoModel& model, const Tensor& x, Rng& rng) {
  if (model.mode != ModelMode::Equivariant) throw ContractError("predict_equivariant: model is not equivariant");
  return predict(model, x, rng).output;
}

Optimizer make_optimizer(const AugerinoModel& model, OptimizerKind kind, double lr, double aug_lr) {
  std::vector<ParamGroup> groups;
  groups.push_back({model.network.parameters(), lr});
  groups.push_back({model.aug_parameters(), aug_lr});
  return Optimizer(kind, std::move(groups));
}

StepMetrics training_step(AugerinoModel& model, const Batch& batch, Optimizer& optimizer, int epoch,
                          int total_epochs, Rng& rng) {
  reset_tape();
  const LossTerms terms = train_loss(model, batch, rng);
  backward(terms.total);
  StepMetrics m;
  m.loss = terms.total.item();
  m.data_loss = terms.data.item();
  m.reg = terms.reg.item();
  optimizer.step(epoch, total_epochs);
  reset_tape();
  m.widths = model.aug.width_values();
  return m;
}

}  // namespace augerino
