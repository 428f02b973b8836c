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

#include <cstdint>
#include <string>
#include <vector>

namespace augerino {

/// Every setting of one experiment. Parsed from a flat `key = value` file;
/// keys not listed here are rejected.
struct ExperimentConfig {
  // data
  std::string dataset = "soft-rotation";
  std::string train_data;  // optional dataset file; generated when empty
  std::string test_data;
  std::uint64_t train_size = 1000;
  std::uint64_t test_size = 500;
  std::uint64_t image_size = 16;
  std::uint64_t data_seed = 0;
  // network
  std::string network = "auto";  // auto: fcn for segmentation, cnn-small otherwise
  std::vector<std::uint64_t> channels{8, 16, 16, 32};
  std::uint64_t hidden = 32;
  // augmentation
  bool augment = true;
  std::string generators = "rot";  // comma list of generator names, or all
  double theta_init = 0.1;
  bool color = false;
  double color_init = 0.1;
  double lambda = 0.05;
  std::uint64_t ncopies_train = 1;
  std::uint64_t ncopies_test = 4;
  // optimization
  std::string optimizer = "adam";
  double lr = 0.01;
  double aug_lr = 0.05;
  std::uint64_t epochs = 20;
  std::uint64_t batch_size = 64;
  std::uint64_t seed = 0;
  std::string out = "out";

  /// Applies one setting; throws ConfigError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Cross-field checks.
  void validate() const;
  /// Canonical text form, readable by parse().
  std::string to_text() const;

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  static const std::vector<std::string>& keys();
};

/// "a,b,c" → {"a","b","c"} with surrounding blanks removed.
std::vector<std::string> split_list(const std::string& text);

}  // namespace augerino
