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
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "augerino/commands.hpp"
#include "augerino/config.hpp"
#include "augerino/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> lambda;
  std::optional<std::uint64_t> ncopies;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Experiment config file (key = value lines)");
  cmd->add_option("--seed", f.seed, "Override the training seed");
  cmd->add_option("--out", f.out, "Override the output directory");
  cmd->add_option("--lambda", f.lambda, "Override the width regularization weight");
  cmd->add_option("--ncopies", f.ncopies, "Override the number of test-time copies");
  cmd->add_option("--set", f.overrides, "Override any config key: --set key=value")->take_all();
}

augerino::ExperimentConfig resolve(const CommonFlags& f) {
  auto cfg = f.config.empty() ? augerino::ExperimentConfig{} : augerino::ExperimentConfig::load(f.config);
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw augerino::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.out = *f.out;
  if (f.lambda) cfg.lambda = *f.lambda;
  if (f.ncopies) cfg.ncopies_test = *f.ncopies;
  cfg.validate();
  return cfg;
}

// "start:stop:count" → count evenly spaced values including both ends.
std::vector<double> parse_grid(const std::string& spec) {
  double start = 0.0, stop = 0.0;
  int count = 0;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &start, &stop, &count, &tail) != 3 || count < 1) {
    throw augerino::ConfigError("--grid expects start:stop:count, got '" + spec + "'");
  }
  std::vector<double> grid;
  for (int i = 0; i < count; ++i) grid.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn augmentation distributions jointly with network weights"};
  app.require_subcommand(1);

  CommonFlags train_f, eval_f, scan_f, traj_f, rays_f, gen_f;
  auto* train = app.add_subcommand("train", "Train a model; writes metrics.csv, summary.csv and model.ckpt");
  add_common(train, train_f);

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint; writes eval.csv and sensitivity.csv");
  add_common(eval, eval_f);
  std::string eval_ckpt;
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();

  auto* scan = app.add_subcommand("scan-range", "Expected loss against one augmentation width");
  add_common(scan, scan_f);
  std::string scan_ckpt, grid_spec = "0:3.141592653589793:33";
  augerino::ScanRangeOptions scan_opt;
  scan->add_option("--checkpoint", scan_ckpt, "Checkpoint file")->required();
  scan->add_option("--axis", scan_opt.axis, "Generator name")->capture_default_str();
  scan->add_option("--grid", grid_spec, "Width grid as start:stop:count")->capture_default_str();
  scan->add_option("--samples", scan_opt.samples, "Monte Carlo draws per width")->capture_default_str();

  auto* traj = app.add_subcommand("trajectories", "Train from several initial widths and log the rotation width");
  add_common(traj, traj_f);
  std::string inits_spec = "0.05,0.7853981633974483,1.2";
  traj->add_option("--inits", inits_spec, "Comma-separated initial widths")->capture_default_str();

  auto* rays = app.add_subcommand("scan-rays", "Loss along random directions in weight space");
  add_common(rays, rays_f);
  std::string rays_ckpt;
  augerino::ScanRaysOptions rays_opt;
  rays->add_option("--checkpoint", rays_ckpt, "Checkpoint file")->required();
  rays->add_option("--rays", rays_opt.rays, "Number of random directions")->capture_default_str();
  rays->add_option("--max-radius", rays_opt.max_radius, "Largest perturbation length")->capture_default_str();
  rays->add_option("--radii", rays_opt.radii, "Radii per ray, from 0 to max-radius")->capture_default_str();

  auto* gen = app.add_subcommand("gen-data", "Write the train and test datasets with metadata sidecars");
  add_common(gen, gen_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (train->parsed()) {
      const auto r = augerino::cmd_train(resolve(train_f));
      std::cout << "train metric " << augerino::format_real(r.train_metric) << ", test metric "
                << augerino::format_real(r.test_metric) << "\n";
    } else if (eval->parsed()) {
      const auto cfg = resolve(eval_f);
      const auto r = augerino::cmd_eval(cfg, eval_ckpt, cfg.ncopies_test);
      std::cout << r.summary.to_string();
    } else if (scan->parsed()) {
      const auto cfg = resolve(scan_f);
      scan_opt.grid = parse_grid(grid_spec);
      scan_opt.lambda = cfg.lambda;
      augerino::cmd_scan_range(cfg, scan_ckpt, scan_opt);
    } else if (traj->parsed()) {
      std::vector<double> inits;
      for (const auto& s : augerino::split_list(inits_spec)) {
        try {
          inits.push_back(std::stod(s));
        } catch (const std::exception&) {
          throw augerino::ConfigError("--inits: '" + s + "' is not a number");
        }
      }
      augerino::cmd_trajectories(resolve(traj_f), inits);
    } else if (rays->parsed()) {
      augerino::cmd_scan_rays(resolve(rays_f), rays_ckpt, rays_opt);
    } else if (gen->parsed()) {
      augerino::cmd_gen_data(resolve(gen_f));
    }
  } catch (const augerino::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const augerino::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
