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
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "augerino/config.hpp"
#include "augerino/csv.hpp"
#include "augerino/dataset.hpp"
#include "augerino/model.hpp"

namespace augerino {

struct DataPair {
  Dataset train;
  Dataset test;
};

/// Loads the configured dataset files, or generates them (the test split uses
/// a seed derived from data_seed).
DataPair load_data(const ExperimentConfig& cfg);

/// Fresh model for the configured dataset: mode, network and augmentation
/// widths (inactive generators masked to zero width).
AugerinoModel build_model(const ExperimentConfig& cfg, const Dataset& train);

/// Factor applied to dataset intensities before they reach the model; the
/// color transforms work on a [0, 255] scale.
double input_scale(const AugerinoModel& model);

struct TrainResult {
  AugerinoModel model;
  CsvTable metrics{{"epoch", "train_loss", "train_metric"}};
  std::vector<std::vector<double>> step_widths;  // θ after every step
  double train_metric = 0.0;
  double test_metric = 0.0;
};

/// Runs the training loop without touching the filesystem.
TrainResult train_model(const ExperimentConfig& cfg, const DataPair& data);

/// Accuracy (classification), mse (regression) or pixel accuracy over
/// non-ignored pixels (segmentation), with `copies` test-time samples drawn
/// from Rng(seed). `rotation` rotates every input by that angle first; for
/// regression the target moves with it.
double evaluate(const AugerinoModel& model, const Dataset& ds, std::size_t copies, std::uint64_t seed,
                double rotation = 0.0);

/// Predicted labels of a classification dataset, inputs rotated by `rotation`.
std::vector<int> predict_labels(const AugerinoModel& model, const Dataset& ds, std::size_t copies,
                                std::uint64_t seed, double rotation = 0.0);

/// Rotates [B×C×H×W] images by `angle` about the center (zero padding).
Tensor rotate_images(const Tensor& x, double angle);

/// Metric name per task: accuracy, mse or pixel_accuracy.
std::string metric_name(TaskKind task);

/// Trains and writes <out>/metrics.csv, <out>/model.ckpt and <out>/config.txt.
TrainResult cmd_train(const ExperimentConfig& cfg);

/// Evaluates a checkpoint on the configured test split and writes
/// <out>/eval.csv (overall metric) and <out>/sensitivity.csv (metric against
/// input rotation over a fixed angle grid).
struct EvalResult {
  CsvTable summary{{"ncopies", "metric"}};
  CsvTable sensitivity{{"angle", "metric"}};
};
EvalResult cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint, std::size_t copies);

/// Fixed angle grid of the rotation-sensitivity curve.
std::vector<double> sensitivity_angles();

struct ScanRangeOptions {
  std::string axis = "rot";
  std::vector<double> grid;
  double lambda = 0.0;
  std::size_t samples = 256;
};

/// Expected loss against the width of one generator, with common random
/// numbers: draw i uses training point i mod n and the same ε at every width.
/// Writes <out>/scan_range.csv.
CsvTable cmd_scan_range(const ExperimentConfig& cfg, const std::string& checkpoint, const ScanRangeOptions& opt);
CsvTable scan_range(const AugerinoModel& model, const Dataset& train, const ScanRangeOptions& opt,
                    std::uint64_t seed);

/// One training run per initial width; logs the rotation width after every
/// step. Writes <out>/trajectories.csv.
CsvTable cmd_trajectories(const ExperimentConfig& cfg, const std::vector<double>& inits);

struct ScanRaysOptions {
  std::size_t rays = 8;
  double max_radius = 1.0;
  std::size_t radii = 11;
  std::size_t max_points = 512;
};

/// Train loss and test error along unit-norm random directions in weight
/// space. Writes <out>/scan_rays.csv.
CsvTable cmd_scan_rays(const ExperimentConfig& cfg, const std::string& checkpoint, const ScanRaysOptions& opt);
CsvTable scan_rays(const AugerinoModel& model, const DataPair& data, const ScanRaysOptions& opt,
                   std::uint64_t seed);

/// Writes <out>/train.ds and <out>/test.ds with their sidecars.
void cmd_gen_data(const ExperimentConfig& cfg);

}  // namespace augerino
