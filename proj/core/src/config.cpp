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
#include "augerino/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "augerino/error.hpp"

namespace augerino {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
    throw ConfigError("config: '" + key + "' expects a finite number, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + v + "'");
}

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k{
      "dataset",   "train_data", "test_data",   "train_size", "test_size",     "image_size",    "data_seed",
      "network",   "channels",   "hidden",      "augment",    "generators",    "theta_init",    "color",
      "color_init", "lambda",    "ncopies_train", "ncopies_test", "optimizer", "lr",            "aug_lr",
      "epochs",    "batch_size", "seed",        "out"};
  return k;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "dataset") dataset = v;
  else if (key == "train_data") train_data = v;
  else if (key == "test_data") test_data = v;
  else if (key == "train_size") train_size = parse_uint(key, v);
  else if (key == "test_size") test_size = parse_uint(key, v);
  else if (key == "image_size") image_size = parse_uint(key, v);
  else if (key == "data_seed") data_seed = parse_uint(key, v);
  else if (key == "network") network = v;
  else if (key == "channels") {
    channels.clear();
    for (const auto& item : split_list(v)) channels.push_back(parse_uint(key, item));
  } else if (key == "hidden") hidden = parse_uint(key, v);
  else if (key == "augment") augment = parse_bool(key, v);
  else if (key == "generators") generators = v;
  else if (key == "theta_init") theta_init = parse_real(key, v);
  else if (key == "color") color = parse_bool(key, v);
  else if (key == "color_init") color_init = parse_real(key, v);
  else if (key == "lambda") lambda = parse_real(key, v);
  else if (key == "ncopies_train") ncopies_train = parse_uint(key, v);
  else if (key == "ncopies_test") ncopies_test = parse_uint(key, v);
  else if (key == "optimizer") optimizer = v;
  else if (key == "lr") lr = parse_real(key, v);
  else if (key == "aug_lr") aug_lr = parse_real(key, v);
  else if (key == "epochs") epochs = parse_uint(key, v);
  else if (key == "batch_size") batch_size = parse_uint(key, v);
  else if (key == "seed") seed = parse_uint(key, v);
  else if (key == "out") out = v;
  else throw ConfigError("config: unknown key '" + key + "'");
}

void ExperimentConfig::validate() const {
  if (dataset != "full-rotation" && dataset != "soft-rotation" && dataset != "rotation-regression" &&
      dataset != "toy-segmentation") {
    throw ConfigError("config: unknown dataset '" + dataset + "'");
  }
  if (network != "auto" && network != "cnn-small" && network != "mlp" && network != "fcn") {
    throw ConfigError("config: unknown network '" + network + "'");
  }
  if (optimizer != "sgd" && optimizer != "adam") throw ConfigError("config: optimizer must be sgd or adam");
  if (train_size == 0 || test_size == 0) throw ConfigError("config: dataset sizes must be positive");
  if (epochs == 0 || batch_size == 0) throw ConfigError("config: epochs and batch_size must be positive");
  if (ncopies_train == 0 || ncopies_test == 0) throw ConfigError("config: ncopies must be at least 1");
  if (lambda < 0.0) throw ConfigError("config: lambda must be ≥ 0");
  if (!(lr > 0.0) || aug_lr < 0.0) throw ConfigError("config: learning rates must be positive");
  if (!(theta_init > 0.0) || !(color_init > 0.0)) throw ConfigError("config: initial widths must be positive");
  if (channels.empty()) throw ConfigError("config: channels must list at least one width");
  if (out.empty()) throw ConfigError("config: out must name a directory");
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream o;
  std::string ch;
  for (std::size_t i = 0; i < channels.size(); ++i) ch += (i ? "," : "") + std::to_string(channels[i]);
  o << "dataset = " << dataset << "\n"
    << "train_data = " << train_data << "\n"
    << "test_data = " << test_data << "\n"
    << "train_size = " << train_size << "\n"
    << "test_size = " << test_size << "\n"
    << "image_size = " << image_size << "\n"
    << "data_seed = " << data_seed << "\n"
    << "network = " << network << "\n"
    << "channels = " << ch << "\n"
    << "hidden = " << hidden << "\n"
    << "augment = " << (augment ? "true" : "false") << "\n"
    << "generators = " << generators << "\n"
    << "theta_init = " << real_text(theta_init) << "\n"
    << "color = " << (color ? "true" : "false") << "\n"
    << "color_init = " << real_text(color_init) << "\n"
    << "lambda = " << real_text(lambda) << "\n"
    << "ncopies_train = " << ncopies_train << "\n"
    << "ncopies_test = " << ncopies_test << "\n"
    << "optimizer = " << optimizer << "\n"
    << "lr = " << real_text(lr) << "\n"
    << "aug_lr = " << real_text(aug_lr) << "\n"
    << "epochs = " << epochs << "\n"
    << "batch_size = " << batch_size << "\n"
    << "seed = " << seed << "\n"
    << "out = " << out << "\n";
  return o.str();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace augerino
