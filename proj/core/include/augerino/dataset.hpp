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
#include <span>
#include <string>
#include <vector>

#include "augerino/model.hpp"
#include "augerino/tensor.hpp"

namespace augerino {

enum class TaskKind { Classification, Regression, Segmentation };

std::string to_string(TaskKind kind);

/// Generation parameters; together they regenerate the dataset exactly.
struct DatasetMeta {
  std::string generator;   // full-rotation, soft-rotation, rotation-regression, toy-segmentation
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  std::uint64_t size = 0;  // image side
  double invariance_range = 0.0;  // s*: labels are unchanged by rotations |φ| ≤ s*
  std::uint64_t num_classes = 0;  // 0 for regression

  bool operator==(const DatasetMeta&) const = default;
};

/// Images with per-image labels, per-pixel labels or real targets.
struct Dataset {
  TaskKind task = TaskKind::Classification;
  Shape item_shape;              // [C×H×W]
  std::vector<double> inputs;    // n·C·H·W, intensities in [0, 1]
  std::vector<int> labels;       // n (classification) or n·H·W (segmentation, −1 = ignore)
  std::vector<double> targets;   // n (regression)
  std::vector<double> angles;    // rotation applied to each item
  DatasetMeta meta;

  std::size_t size() const { return meta.n; }
  std::size_t item_numel() const { return shape_numel(item_shape); }
  /// Mini-batch of the listed items; inputs are multiplied by `scale`.
  Batch batch(std::span<const std::size_t> indices, double scale = 1.0) const;
  Tensor inputs_of(std::span<const std::size_t> indices, double scale = 1.0) const;

  bool operator==(const Dataset&) const = default;
};

/// Four glyph classes, each rotated by U[0, 2π). s* = π.
Dataset gen_full_rotation(std::size_t n, std::size_t size, std::uint64_t seed);

/// Two asymmetric sprites, rotated within [−π/4, π/4] (upper half) or
/// [3π/4, 5π/4] (lower half). label = 2·sprite + half. s* = π/4.
Dataset gen_soft_rotation(std::size_t n, std::size_t size, std::uint64_t seed);

/// Face-like blob patterns rotated by U[−π/2, π/2]; the target is the angle.
/// s* = 0.
Dataset gen_rotation_regression(std::size_t n, std::size_t size, std::uint64_t seed);

/// Disks (class 1) and squares (class 2) on background 0; image and mask are
/// rotated together by one U[0, 2π) angle per item. Pixels whose source falls
/// outside the frame are padding: intensity 0, label −1. s* = π.
Dataset gen_toy_segmentation(std::size_t n, std::size_t size, std::uint64_t seed);

/// Dispatches on a generator name.
Dataset generate_dataset(const std::string& generator, std::size_t n, std::size_t size, std::uint64_t seed);

/// Soft-rotation half-plane of a rotation angle: 0 (upper) when cos(a) ≥ 0.
int soft_rotation_half(double angle);

/// Glyph value in [0, 1] of a full-rotation class or soft-rotation sprite at
/// unrotated normalized coordinates (u, v). `pixel` sets the edge softness.
double glyph_value(const std::string& generator, int shape, double u, double v, double pixel);

/// Renders a single template of `generator` at a given rotation angle.
std::vector<double> render_rotated(const std::string& generator, int shape, double angle, std::size_t size);

inline constexpr std::uint32_t kDatasetVersion = 1;

std::vector<std::uint8_t> encode_dataset(const Dataset& ds);
Dataset decode_dataset(std::span<const std::uint8_t> bytes);
/// Writes the binary file and a `<path>.meta` key=value sidecar.
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);
std::string dataset_sidecar(const Dataset& ds);

}  // namespace augerino
