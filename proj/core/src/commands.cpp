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
#include "augerino/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

#include "augerino/binary_io.hpp"
#include "augerino/checkpoint.hpp"
#include "augerino/error.hpp"
#include "augerino/ops.hpp"
#include "augerino/warp.hpp"

namespace augerino {
namespace {

// splitmix64 finalizer: independent seeds for the named random streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

enum Stream : std::uint64_t {
  kInitStream = 1,
  kAugStream = 2,
  kShuffleStream = 3,
  kTestSplit = 4,
  kTestEval = 5,
  kTrainEval = 6,
  kScanEps = 7,
  kRayTrain = 8,
  kRayTest = 9,
  kRayDirection = 100,
};

constexpr std::size_t kChunk = 128;

struct Tally {
  double sum = 0.0;
  double count = 0.0;
};

ModelMode mode_for(TaskKind task) {
  switch (task) {
    case TaskKind::Classification:
      return ModelMode::InvariantClassify;
    case TaskKind::Regression:
      return ModelMode::Regress;
    case TaskKind::Segmentation:
      return ModelMode::Equivariant;
  }
  return ModelMode::InvariantClassify;
}

void check_compatible(const AugerinoModel& model, const Dataset& ds) {
  if (model.mode != mode_for(ds.task)) {
    throw ContractError("model mode " + to_string(model.mode) + " does not match a " + to_string(ds.task) +
                        " dataset");
  }
}

// Accumulates the task metric over `indices`; appends argmax labels to
// `labels_out` when given.
Tally evaluate_indices(const AugerinoModel& model, const Dataset& ds, std::span<const std::size_t> indices,
                       std::size_t copies, Rng& rng, double rotation, std::vector<int>* labels_out) {
  if (rotation != 0.0 && ds.task == TaskKind::Segmentation) {
    throw ContractError("evaluate: rotated evaluation is not defined for segmentation masks");
  }
  NoGradScope no_grad;
  const double scale = input_scale(model);
  const std::size_t hw = ds.item_shape[1] * ds.item_shape[2];
  Tally t;
  for (std::size_t start = 0; start < indices.size(); start += kChunk) {
    const auto chunk = indices.subspan(start, std::min(kChunk, indices.size() - start));
    const Batch b = ds.batch(chunk, scale);
    const Tensor x = rotation != 0.0 ? rotate_images(b.inputs, rotation) : b.inputs;
    const Tensor eps = sample_eps(rng, chunk.size() * copies, model.eps_dim());
    const Prediction p = predict(model, x, eps, copies);
    reset_tape();
    switch (ds.task) {
      case TaskKind::Classification:
        for (std::size_t i = 0; i < chunk.size(); ++i) t.sum += p.labels[i] == b.labels[i] ? 1.0 : 0.0;
        t.count += static_cast<double>(chunk.size());
        break;
      case TaskKind::Regression:
        for (std::size_t i = 0; i < chunk.size(); ++i) {
          const double d = p.output.at(i) - (b.targets.at(i) + rotation);
          t.sum += d * d;
        }
        t.count += static_cast<double>(chunk.size());
        break;
      case TaskKind::Segmentation:
        for (std::size_t i = 0; i < chunk.size() * hw; ++i) {
          if (b.labels[i] < 0) continue;
          t.sum += p.labels[i] == b.labels[i] ? 1.0 : 0.0;
          t.count += 1.0;
        }
        break;
    }
    if (labels_out) labels_out->insert(labels_out->end(), p.labels.begin(), p.labels.end());
  }
  return t;
}

std::vector<std::size_t> first_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

std::vector<std::string> width_columns(const AugerinoModel& model) {
  std::vector<std::string> cols;
  for (const auto& name : model.basis.names) cols.push_back("theta_" + name);
  if (model.color_aug) {
    cols.push_back("theta_brightness");
    cols.push_back("theta_contrast");
  }
  return cols;
}

std::vector<double> all_widths(const AugerinoModel& model) {
  auto w = model.aug.width_values();
  if (model.color_aug) {
    const auto c = model.color.width_values();
    w.insert(w.end(), c.begin(), c.end());
  }
  return w;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

std::string metric_name(TaskKind task) {
  switch (task) {
    case TaskKind::Classification:
      return "accuracy";
    case TaskKind::Regression:
      return "mse";
    case TaskKind::Segmentation:
      return "pixel_accuracy";
  }
  return "accuracy";
}

DataPair load_data(const ExperimentConfig& cfg) {
  cfg.validate();
  DataPair d;
  d.train = cfg.train_data.empty()
                ? generate_dataset(cfg.dataset, cfg.train_size, cfg.image_size, cfg.data_seed)
                : load_dataset(cfg.train_data);
  d.test = cfg.test_data.empty() ? generate_dataset(cfg.dataset, cfg.test_size, cfg.image_size,
                                                    derive_seed(cfg.data_seed, kTestSplit))
                                 : load_dataset(cfg.test_data);
  if (d.train.task != d.test.task || d.train.item_shape != d.test.item_shape) {
    throw ConfigError("train and test datasets disagree in task or image shape");
  }
  return d;
}

AugerinoModel build_model(const ExperimentConfig& cfg, const Dataset& train) {
  cfg.validate();
  NetworkSpec spec;
  if (cfg.network == "auto") {
    spec.kind = train.task == TaskKind::Segmentation ? NetworkKind::Fcn : NetworkKind::CnnSmall;
  } else {
    spec.kind = parse_network_kind(cfg.network);
  }
  spec.input_channels = train.item_shape.at(0);
  spec.input_size = spec.kind == NetworkKind::Mlp ? train.item_numel() : train.item_shape.at(1);
  spec.widths.assign(cfg.channels.begin(), cfg.channels.end());
  spec.hidden = cfg.hidden;
  spec.output_dim = train.task == TaskKind::Regression ? 1 : train.meta.num_classes;
  spec.head = train.task == TaskKind::Regression ? OutputHead::Linear : OutputHead::LogProbabilities;

  AugerinoModel model;
  Rng init_rng(derive_seed(cfg.seed, kInitStream));
  model.network = Network::build(spec, init_rng);
  model.mode = mode_for(train.task);
  model.basis = GeneratorBasis::affine2d();
  const std::size_t k = model.basis.size();
  std::vector<double> mask(k, 0.0);
  if (cfg.augment) {
    if (cfg.generators == "all") {
      std::fill(mask.begin(), mask.end(), 1.0);
    } else {
      for (const auto& name : split_list(cfg.generators)) {
        try {
          mask[model.basis.index_of(name)] = 1.0;
        } catch (const IndexError&) {
          throw ConfigError("config: unknown generator '" + name + "'");
        }
      }
    }
  }
  std::vector<double> widths(k);
  for (std::size_t i = 0; i < k; ++i) widths[i] = mask[i] != 0.0 ? cfg.theta_init : 0.0;
  model.aug = AugParams::with_widths(widths, mask);
  if (cfg.color && cfg.augment) {
    model.color_aug = true;
    model.color = AugParams::with_widths({cfg.color_init, cfg.color_init}, {1.0, 1.0});
  }
  model.n_copies_train = cfg.ncopies_train;
  model.n_copies_test = cfg.ncopies_test;
  model.lambda = cfg.lambda;
  model.validate();
  return model;
}

double input_scale(const AugerinoModel& model) { return model.color_aug ? 255.0 : 1.0; }

Tensor rotate_images(const Tensor& x, double angle) {
  if (x.rank() != 4) throw DimensionError("rotate_images: expected [B×C×H×W], got " + shape_str(x.shape()));
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  std::vector<double> g;
  for (std::size_t b = 0; b < x.dim(0); ++b) g.insert(g.end(), {c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0});
  return warp(x, Tensor::from({x.dim(0), 3, 3}, std::move(g)));
}

double evaluate(const AugerinoModel& model, const Dataset& ds, std::size_t copies, std::uint64_t seed,
                double rotation) {
  check_compatible(model, ds);
  Rng rng(seed);
  const auto idx = first_indices(ds.size());
  const Tally t = evaluate_indices(model, ds, idx, copies, rng, rotation, nullptr);
  return t.count > 0.0 ? t.sum / t.count : 0.0;
}

std::vector<int> predict_labels(const AugerinoModel& model, const Dataset& ds, std::size_t copies,
                                std::uint64_t seed, double rotation) {
  check_compatible(model, ds);
  if (ds.task != TaskKind::Classification) throw ContractError("predict_labels: classification datasets only");
  Rng rng(seed);
  const auto idx = first_indices(ds.size());
  std::vector<int> labels;
  evaluate_indices(model, ds, idx, copies, rng, rotation, &labels);
  return labels;
}

TrainResult train_model(const ExperimentConfig& cfg, const DataPair& data) {
  TrainResult result;
  result.model = build_model(cfg, data.train);
  AugerinoModel& model = result.model;
  const OptimizerKind kind = cfg.optimizer == "sgd" ? OptimizerKind::Sgd : OptimizerKind::Adam;
  Optimizer opt = make_optimizer(model, kind, cfg.lr, cfg.aug_lr);
  Rng aug_rng(derive_seed(cfg.seed, kAugStream));
  Rng shuffle_rng(derive_seed(cfg.seed, kShuffleStream));
  const double scale = input_scale(model);
  const std::size_t n = data.train.size();
  const int epochs = static_cast<int>(cfg.epochs);

  std::vector<std::string> cols{"epoch", "train_loss", "train_" + metric_name(data.train.task)};
  const auto wc = width_columns(model);
  cols.insert(cols.end(), wc.begin(), wc.end());
  result.metrics = CsvTable(cols);

  std::vector<std::size_t> order = first_indices(n);
  const std::vector<std::size_t> probe = first_indices(std::min<std::size_t>(n, 256));
  std::size_t step = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::span<const std::size_t> idx(order.data() + start, std::min<std::size_t>(cfg.batch_size, n - start));
      const Batch batch = data.train.batch(idx, scale);
      StepMetrics m;
      try {
        m = training_step(model, batch, opt, epoch, epochs, aug_rng);
      } catch (const NumericError& e) {
        reset_tape();
        throw NumericError("training step " + std::to_string(step) + ": " + e.what());
      }
      if (!std::isfinite(m.loss)) throw NumericError("training step " + std::to_string(step) + ": loss is not finite");
      loss_sum += m.loss * static_cast<double>(idx.size());
      result.step_widths.push_back(all_widths(model));
      ++step;
    }
    Rng eval_rng(derive_seed(cfg.seed, kTrainEval));
    const Tally t = evaluate_indices(model, data.train, probe, 1, eval_rng, 0.0, nullptr);
    result.train_metric = t.count > 0.0 ? t.sum / t.count : 0.0;
    std::vector<double> row{static_cast<double>(epoch + 1), loss_sum / static_cast<double>(n), result.train_metric};
    const auto w = all_widths(model);
    row.insert(row.end(), w.begin(), w.end());
    result.metrics.add_row(row);
  }
  result.test_metric = evaluate(model, data.test, model.n_copies_test, derive_seed(cfg.seed, kTestEval));
  return result;
}

TrainResult cmd_train(const ExperimentConfig& cfg) {
  const DataPair data = load_data(cfg);
  TrainResult r = train_model(cfg, data);
  ensure_dir(cfg.out);
  const std::string text = cfg.to_text();
  write_file(join(cfg.out, "config.txt"), {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  r.metrics.write(join(cfg.out, "metrics.csv"));
  save_checkpoint(r.model, join(cfg.out, "model.ckpt"));
  std::vector<std::string> cols{"train_" + metric_name(data.train.task), "test_" + metric_name(data.test.task)};
  const auto wc = width_columns(r.model);
  cols.insert(cols.end(), wc.begin(), wc.end());
  CsvTable summary(cols);
  std::vector<double> row{r.train_metric, r.test_metric};
  const auto w = all_widths(r.model);
  row.insert(row.end(), w.begin(), w.end());
  summary.add_row(row);
  summary.write(join(cfg.out, "summary.csv"));
  return r;
}

std::vector<double> sensitivity_angles() {
  std::vector<double> a;
  for (int i = -12; i <= 12; ++i) a.push_back(std::numbers::pi * i / 12.0);
  return a;
}

EvalResult cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint, std::size_t copies) {
  if (copies == 0) throw ConfigError("eval: ncopies must be at least 1");
  const AugerinoModel model = load_checkpoint(checkpoint);
  const DataPair data = load_data(cfg);
  check_compatible(model, data.test);
  const std::uint64_t seed = derive_seed(cfg.seed, kTestEval);
  EvalResult r;
  const std::string metric = metric_name(data.test.task);
  r.summary = CsvTable({"ncopies", metric});
  r.summary.add_row({static_cast<double>(copies), evaluate(model, data.test, copies, seed)});
  r.sensitivity = CsvTable({"angle", metric});
  if (data.test.task != TaskKind::Segmentation) {
    for (double a : sensitivity_angles()) r.sensitivity.add_row({a, evaluate(model, data.test, copies, seed, a)});
  }
  ensure_dir(cfg.out);
  r.summary.write(join(cfg.out, "eval.csv"));
  r.sensitivity.write(join(cfg.out, "sensitivity.csv"));
  return r;
}

CsvTable scan_range(const AugerinoModel& model, const Dataset& train, const ScanRangeOptions& opt,
                    std::uint64_t seed) {
  if (opt.grid.empty()) throw ConfigError("scan-range: the width grid is empty");
  if (opt.samples == 0) throw ConfigError("scan-range: samples must be positive");
  check_compatible(model, train);
  std::size_t axis = 0;
  try {
    axis = model.basis.index_of(opt.axis);
  } catch (const IndexError&) {
    throw ConfigError("scan-range: unknown generator '" + opt.axis + "'");
  }
  std::vector<std::size_t> idx(opt.samples);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i % train.size();
  const Batch batch = train.batch(idx, input_scale(model));
  Rng rng(seed);
  const Tensor eps = sample_eps(rng, opt.samples, model.eps_dim());
  const std::vector<double> base = model.aug.width_values();

  std::vector<bool> saved;
  for (const auto& p : model.network.parameters()) {
    saved.push_back(p.requires_grad());
    Tensor(p).set_requires_grad(false);
  }
  CsvTable table({"width", "loss", "objective", "dobjective_dwidth"});
  for (double w : opt.grid) {
    std::vector<double> vals = base;
    vals[axis] = w;
    const Tensor widths = Tensor::from({vals.size()}, vals, true);
    reset_tape();
    const LossTerms terms = loss_at_widths(model, batch, widths, eps, 1, opt.lambda);
    backward(terms.total);
    table.add_row({w, terms.data.item(), terms.total.item(), widths.grad()[axis]});
  }
  reset_tape();
  for (std::size_t i = 0; i < saved.size(); ++i) Tensor(model.network.parameters()[i]).set_requires_grad(saved[i]);
  return table;
}

CsvTable cmd_scan_range(const ExperimentConfig& cfg, const std::string& checkpoint, const ScanRangeOptions& opt) {
  const AugerinoModel model = load_checkpoint(checkpoint);
  const DataPair data = load_data(cfg);
  CsvTable t = scan_range(model, data.train, opt, derive_seed(cfg.seed, kScanEps));
  ensure_dir(cfg.out);
  t.write(join(cfg.out, "scan_range.csv"));
  return t;
}

CsvTable cmd_trajectories(const ExperimentConfig& cfg, const std::vector<double>& inits) {
  if (inits.size() < 2) throw ConfigError("trajectories: give at least two initial widths");
  const DataPair data = load_data(cfg);
  CsvTable table({"init", "step", "theta_rot"});
  for (double init : inits) {
    ExperimentConfig c = cfg;
    c.theta_init = init;
    const TrainResult r = train_model(c, data);
    const std::size_t rot = r.model.basis.index_of("rot");
    table.add_row({init, 0.0, init});
    for (std::size_t s = 0; s < r.step_widths.size(); ++s) {
      table.add_row({init, static_cast<double>(s + 1), r.step_widths[s][rot]});
    }
  }
  ensure_dir(cfg.out);
  table.write(join(cfg.out, "trajectories.csv"));
  return table;
}

CsvTable scan_rays(const AugerinoModel& model_in, const DataPair& data, const ScanRaysOptions& opt,
                   std::uint64_t seed) {
  if (opt.rays == 0 || opt.radii == 0) throw ConfigError("scan-rays: rays and radii must be positive");
  if (!(opt.max_radius >= 0.0)) throw ConfigError("scan-rays: max_radius must be ≥ 0");
  AugerinoModel model = model_in;
  model.network = Network::from_parameters(model_in.network.spec(), [&] {
    std::vector<Tensor> copy;
    for (const auto& p : model_in.network.parameters()) copy.push_back(p.detach());
    return copy;
  }());
  check_compatible(model, data.train);
  auto& params = model.network.parameters();
  std::vector<std::vector<double>> origin;
  std::size_t dim = 0;
  for (const auto& p : params) {
    origin.emplace_back(p.values().begin(), p.values().end());
    dim += p.numel();
  }
  const auto train_idx = first_indices(std::min(opt.max_points, data.train.size()));
  const auto test_idx = first_indices(std::min(opt.max_points, data.test.size()));
  const Batch train_batch = data.train.batch(train_idx, input_scale(model));
  Rng eps_rng(derive_seed(seed, kRayTrain));
  const Tensor train_eps = sample_eps(eps_rng, train_idx.size(), model.eps_dim());

  auto train_loss_now = [&] {
    NoGradScope no_grad;
    const double v = train_loss(model, train_batch, train_eps, 1).data.item();
    reset_tape();
    return v;
  };
  auto test_error_now = [&] {
    Rng rng(derive_seed(seed, kRayTest));
    const Tally t = evaluate_indices(model, data.test, test_idx, model.n_copies_test, rng, 0.0, nullptr);
    const double m = t.count > 0.0 ? t.sum / t.count : 0.0;
    return data.test.task == TaskKind::Regression ? m : 1.0 - m;
  };

  CsvTable table({"ray", "radius", "train_loss", "test_error"});
  for (std::size_t r = 0; r < opt.rays; ++r) {
    Rng rng(derive_seed(seed, kRayDirection + r));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> dir(dim);
    double norm = 0.0;
    for (auto& d : dir) {
      d = normal(rng);
      norm += d * d;
    }
    norm = std::sqrt(norm);
    for (auto& d : dir) d /= norm;
    for (std::size_t k = 0; k < opt.radii; ++k) {
      const double radius = opt.radii == 1 ? 0.0 : opt.max_radius * static_cast<double>(k) / static_cast<double>(opt.radii - 1);
      std::size_t off = 0;
      for (std::size_t i = 0; i < params.size(); ++i) {
        auto vals = params[i].mutable_values();
        for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = origin[i][j] + radius * dir[off + j];
        off += vals.size();
      }
      table.add_row({static_cast<double>(r), radius, train_loss_now(), test_error_now()});
    }
  }
  return table;
}

CsvTable cmd_scan_rays(const ExperimentConfig& cfg, const std::string& checkpoint, const ScanRaysOptions& opt) {
  const AugerinoModel model = load_checkpoint(checkpoint);
  const DataPair data = load_data(cfg);
  CsvTable t = scan_rays(model, data, opt, derive_seed(cfg.seed, kScanEps));
  ensure_dir(cfg.out);
  t.write(join(cfg.out, "scan_rays.csv"));
  return t;
}

void cmd_gen_data(const ExperimentConfig& cfg) {
  const DataPair data = load_data(cfg);
  ensure_dir(cfg.out);
  save_dataset(data.train, join(cfg.out, "train.ds"));
  save_dataset(data.test, join(cfg.out, "test.ds"));
}

}  // namespace augerino
