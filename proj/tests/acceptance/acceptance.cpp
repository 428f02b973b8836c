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
// Acceptance driver: runs each numbered criterion and prints one
// "[PASS] criterion N" or "[FAIL] criterion N" line per criterion.
//
//   augerino_acceptance [--criterion N] [--out DIR]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "augerino/binary_io.hpp"
#include "augerino/checkpoint.hpp"
#include "augerino/color.hpp"
#include "augerino/commands.hpp"
#include "augerino/error.hpp"
#include "augerino/gradcheck.hpp"
#include "augerino/lie.hpp"
#include "augerino/ops.hpp"
#include "augerino/warp.hpp"

namespace fs = std::filesystem;
using namespace augerino;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

fs::path g_out = "acceptance_out";

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void note(const std::string& s) {
  std::printf("    %s\n", s.c_str());
  std::fflush(stdout);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path run_dir(const std::string& name) {
  const fs::path d = g_out / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Deterministic uniform values for property checks.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Tensor tensor(Shape shape, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(shape_numel(shape));
    for (auto& x : v) x = uniform(lo, hi);
    return Tensor::from(std::move(shape), std::move(v));
  }
  int label(int classes) { return std::uniform_int_distribution<int>(0, classes - 1)(rng_); }

 private:
  Rng rng_;
};

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------
// Experiment configurations.

ExperimentConfig soft_config(double lambda, std::uint64_t seed, double init) {
  ExperimentConfig c;
  c.dataset = "soft-rotation";
  c.train_size = 1000;
  c.test_size = 500;
  c.image_size = 16;
  c.generators = "rot";
  c.theta_init = init;
  c.lambda = lambda;
  c.epochs = 30;
  c.batch_size = 64;
  c.lr = 0.01;
  c.aug_lr = 0.05;
  c.seed = seed;
  c.data_seed = seed;
  return c;
}

ExperimentConfig full_config(double lambda, std::uint64_t seed) {
  ExperimentConfig c = soft_config(lambda, seed, 0.5);
  c.dataset = "full-rotation";
  return c;
}

ExperimentConfig regression_config() {
  ExperimentConfig c = soft_config(0.05, 0, 0.5);
  c.dataset = "rotation-regression";
  c.image_size = 32;
  c.epochs = 20;
  c.aug_lr = 0.2;
  return c;
}

ExperimentConfig segmentation_config(bool augment) {
  ExperimentConfig c = soft_config(0.05, 0, 0.5);
  c.dataset = "toy-segmentation";
  c.augment = augment;
  c.image_size = 32;
  c.channels = {8, 16, 16};
  c.epochs = 20;
  return c;
}

double rot_width(const AugerinoModel& m) { return m.aug.width_values()[kRotationGenerator]; }

// ---------------------------------------------------------------------------
// 1. Gradient correctness.

struct GradCase {
  std::string name;
  double tol;
  std::function<double(std::uint64_t)> error;  // worst relative error for one seed
};

Tensor weighted(const Tensor& y, std::uint64_t seed) {
  Draw d(seed * 7919 + 1);
  return sum(mul(y, d.tensor(y.shape())));
}

Tensor away_from_zero(Tensor t) {
  for (auto& v : t.mutable_values())
    if (std::abs(v) < 1e-3) v += 0.01;
  return t;
}

std::vector<GradCase> gradient_cases() {
  constexpr double smooth = 1e-6, piecewise = 1e-4, h = 1e-6;
  std::vector<GradCase> cases;
  auto reg = [&](std::string name, double tol, std::function<double(std::uint64_t)> f) {
    cases.push_back({std::move(name), tol, std::move(f)});
  };
  reg("matmul", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor a = d.tensor({3, 4}), b = d.tensor({4, 2});
    return std::max(grad_check([&](const Tensor& t) { return weighted(matmul(t, b), s); }, a, h),
                    grad_check([&](const Tensor& t) { return weighted(matmul(a, t), s); }, b, h));
  });
  reg("bmm", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor a = d.tensor({2, 3, 4}), b = d.tensor({2, 4, 3});
    return std::max(grad_check([&](const Tensor& t) { return weighted(bmm(t, b), s); }, a, h),
                    grad_check([&](const Tensor& t) { return weighted(bmm(a, t), s); }, b, h));
  });
  reg("transpose", smooth, [=](std::uint64_t s) {
    Draw d(s);
    return grad_check([&](const Tensor& t) { return weighted(transpose(t), s); }, d.tensor({3, 5}), h);
  });
  reg("linear", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor x = d.tensor({4, 5}), w = d.tensor({3, 5}), b = d.tensor({3});
    return std::max({grad_check([&](const Tensor& t) { return weighted(linear(t, w, b), s); }, x, h),
                     grad_check([&](const Tensor& t) { return weighted(linear(x, t, b), s); }, w, h),
                     grad_check([&](const Tensor& t) { return weighted(linear(x, w, t), s); }, b, h)});
  });
  reg("conv2d", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor x = d.tensor({2, 2, 6, 6}), k = d.tensor({3, 2, 3, 3});
    double e = 0.0;
    for (int stride : {1, 2})
      for (int pad : {0, 1}) {
        e = std::max(e, grad_check([&](const Tensor& t) { return weighted(conv2d(t, k, stride, pad), s); }, x, h));
        e = std::max(e, grad_check([&](const Tensor& t) { return weighted(conv2d(x, t, stride, pad), s); }, k, h));
      }
    return e;
  });
  reg("add_channel_bias", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor x = d.tensor({2, 3, 2, 2}), b = d.tensor({3});
    return std::max(grad_check([&](const Tensor& t) { return weighted(add_channel_bias(t, b), s); }, x, h),
                    grad_check([&](const Tensor& t) { return weighted(add_channel_bias(x, t), s); }, b, h));
  });
  reg("relu", piecewise, [=](std::uint64_t s) {
    Draw d(s);
    return grad_check([&](const Tensor& t) { return weighted(relu(t), s); }, away_from_zero(d.tensor({20})), h);
  });
  reg("add_const/scale_const", smooth, [=](std::uint64_t s) {
    Draw d(s);
    return grad_check([&](const Tensor& t) { return weighted(scale_const(add_const(t, 0.3), -1.7), s); },
                      d.tensor({7}), h);
  });
  reg("add/sub/mul", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor a = d.tensor({6}), b = d.tensor({6});
    return std::max(grad_check([&](const Tensor& t) { return weighted(mul(add(t, b), sub(t, b)), s); }, a, h),
                    grad_check([&](const Tensor& t) { return weighted(mul(a, sub(a, t)), s); }, b, h));
  });
  reg("square/softplus", smooth, [=](std::uint64_t s) {
    Draw d(s);
    return grad_check([&](const Tensor& t) { return weighted(softplus(square(t)), s); }, d.tensor({8}, -3, 3), h);
  });
  reg("sum/mean/reshape", smooth, [=](std::uint64_t s) {
    Draw d(s);
    return grad_check([&](const Tensor& t) { return mul(sum(square(reshape(t, {3, 2}))), mean(t)); },
                      d.tensor({6}), h);
  });
  reg("scale_columns", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor x = d.tensor({4, 3}), v = d.tensor({3});
    return std::max(grad_check([&](const Tensor& t) { return weighted(scale_columns(t, v), s); }, x, h),
                    grad_check([&](const Tensor& t) { return weighted(scale_columns(x, t), s); }, v, h));
  });
  reg("gather_rows/group_mean", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const std::vector<std::size_t> rows{2, 0, 0, 1, 2, 2};
    return grad_check([&](const Tensor& t) { return weighted(group_mean(gather_rows(t, rows), 3), s); },
                      d.tensor({3, 4}), h);
  });
  reg("log_softmax/nll", smooth, [=](std::uint64_t s) {
    Draw d(s);
    std::vector<int> labels;
    for (int i = 0; i < 4; ++i) labels.push_back(d.label(5));
    const Tensor z = d.tensor({4, 5}, -4, 4);
    return std::max(grad_check([&](const Tensor& t) { return weighted(log_softmax(t), s); }, z, h),
                    grad_check([&](const Tensor& t) { return nll_from_logprob(log_softmax(t), labels); }, z, h));
  });
  reg("masked_pixel_nll", smooth, [=](std::uint64_t s) {
    Draw d(s);
    std::vector<int> labels;
    for (int i = 0; i < 2 * 9; ++i) labels.push_back(d.label(4) - 1);
    labels[0] = 1;
    return grad_check([&](const Tensor& t) { return masked_pixel_nll(t, labels); }, d.tensor({2, 3, 3, 3}), h);
  });
  reg("mse_loss", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor p = d.tensor({5, 1}), q = d.tensor({5, 1});
    return std::max(grad_check([&](const Tensor& t) { return mse_loss(t, q); }, p, h),
                    grad_check([&](const Tensor& t) { return mse_loss(p, t); }, q, h));
  });
  reg("expm", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor a = d.tensor({3, 3}, -1.5, 1.5);
    return std::max(grad_check([&](const Tensor& t) { return weighted(expm(t), s); }, a, h),
                    grad_check([&](const Tensor& t) { return weighted(expm(t), s); }, scale_const(a, 3.0).detach(), h));
  });
  reg("softplus_width/regularizer", smooth, [=](std::uint64_t s) {
    Draw d(s);
    return grad_check([&](const Tensor& t) { return regularizer_neg_l2(softplus_width(t)); }, d.tensor({6}, -3, 3), h);
  });
  reg("sample_affine", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const auto basis = GeneratorBasis::affine2d();
    const Tensor eps = d.tensor({3, 6});
    return grad_check([&](const Tensor& t) { return weighted(sample_affine(t, basis, eps), s); },
                      d.tensor({6}, 0.05, 1.0), h);
  });
  reg("sample_gaussian_affine", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor z = d.tensor({4, 3}, -2, 2), mu = d.tensor({3}), tril = d.tensor({3, 3}, 0.05, 1.0);
    return std::max(
        grad_check([&](const Tensor& t) { return weighted(sample_gaussian_affine({t, tril}, z, 16, 16), s); }, mu, h),
        grad_check([&](const Tensor& t) { return weighted(sample_gaussian_affine({mu, t}, z, 16, 16), s); }, tril, h));
  });
  reg("affine_grid", smooth, [=](std::uint64_t s) {
    Draw d(s);
    return grad_check([&](const Tensor& t) { return weighted(affine_grid(t, 4, 5), s); }, d.tensor({2, 3, 3}), h);
  });
  reg("bilinear_sample", piecewise, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor x = d.tensor({2, 2, 6, 6}), grid = d.tensor({2, 5, 5, 2}, -1.1, 1.1);
    return std::max(grad_check([&](const Tensor& t) { return weighted(bilinear_sample(t, grid), s); }, x, h),
                    grad_check([&](const Tensor& t) { return weighted(bilinear_sample(x, t), s); }, grid, h));
  });
  reg("warp", piecewise, [=](std::uint64_t s) {
    Draw d(s);
    const auto basis = GeneratorBasis::affine2d();
    const Tensor g = expm(algebra_element(Tensor::from({6}, {0.2, 0.2, 1.0, 0.1, 0.1, 0.1}), basis, d.tensor({6})));
    const Tensor gb = reshape(g, {1, 3, 3}).detach();
    const Tensor x = d.tensor({1, 2, 7, 7});
    return std::max(grad_check([&](const Tensor& t) { return weighted(warp(t, gb), s); }, x, h),
                    grad_check([&](const Tensor& t) { return weighted(warp(x, t), s); }, gb, h));
  });
  reg("brightness_adjust", smooth, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor x = d.tensor({2, 1, 3, 3}, 60, 190), t = d.tensor({2}, -50, 50);
    return std::max(grad_check([&](const Tensor& a) { return weighted(brightness_adjust(a, t), s); }, x, h),
                    grad_check([&](const Tensor& a) { return weighted(brightness_adjust(x, a), s); }, t, h));
  });
  reg("contrast_adjust", piecewise, [=](std::uint64_t s) {
    Draw d(s);
    const Tensor x = d.tensor({2, 1, 3, 3}, 90, 165), t = d.tensor({2}, -80, 80);
    return std::max(grad_check([&](const Tensor& a) { return weighted(contrast_adjust(a, t), s); }, x, h),
                    grad_check([&](const Tensor& a) { return weighted(contrast_adjust(x, a), s); }, t, h));
  });
  reg("network (cnn-small)", piecewise, [=](std::uint64_t s) {
    NetworkSpec spec;
    spec.input_size = 8;
    spec.widths = {2, 3, 3, 4};
    spec.hidden = 5;
    spec.output_dim = 3;
    Rng rng(s);
    const Network net = Network::build(spec, rng);
    Draw d(s);
    const Tensor x = d.tensor({1, 1, 8, 8});
    const std::vector<int> label{d.label(3)};
    double e = grad_check([&](const Tensor& t) { return nll_from_logprob(net.forward(t), label); }, x, h);
    for (std::size_t i = 0; i < net.parameters().size(); ++i) {
      e = std::max(e, grad_check(
                          [&](const Tensor& t) {
                            auto p = net.parameters();
                            p[i] = t;
                            return nll_from_logprob(Network::from_parameters(spec, p).forward(x), label);
                          },
                          net.parameters()[i].detach(), h));
    }
    return e;
  });
  reg("composite expm>grid>sample>network>loss>regularizer", piecewise, [=](std::uint64_t s) {
    NetworkSpec spec;
    spec.input_size = 8;
    spec.widths = {2, 3, 3, 4};
    spec.hidden = 5;
    spec.output_dim = 3;
    Rng rng(s + 1000);
    AugerinoModel m;
    m.network = Network::build(spec, rng);
    Draw d(s);
    Batch b;
    b.inputs = d.tensor({2, 1, 8, 8}, 0, 1);
    b.labels = {d.label(3), d.label(3)};
    const Tensor eps = d.tensor({4, 6});
    const Tensor raw0 = d.tensor({6}, -2, 0);
    const ScalarFn via_widths = [&](const Tensor& t) {
      AugerinoModel mm = m;
      mm.aug.theta_raw = t;
      mm.aug.mask.assign(6, 1.0);
      return train_loss(mm, b, eps, 2).total;
    };
    double e = grad_check(via_widths, raw0, h);
    const ScalarFn via_weights = [&](const Tensor& t) {
      AugerinoModel mm = m;
      auto p = m.network.parameters();
      p[0] = t;
      mm.network = Network::from_parameters(spec, p);
      mm.aug.theta_raw = raw0;
      mm.aug.mask.assign(6, 1.0);
      return train_loss(mm, b, eps, 2).total;
    };
    return std::max(e, grad_check(via_weights, m.network.parameters()[0].detach(), h));
  });
  reg("composite with color ops", piecewise, [=](std::uint64_t s) {
    NetworkSpec spec;
    spec.input_size = 8;
    spec.widths = {2, 3, 3, 4};
    spec.hidden = 5;
    spec.output_dim = 3;
    Rng rng(s + 2000);
    AugerinoModel m;
    m.network = Network::build(spec, rng);
    m.aug = AugParams::with_widths({0, 0, 0.5, 0, 0, 0}, {0, 0, 1, 0, 0, 0});
    m.color_aug = true;
    Draw d(s);
    Batch b;
    b.inputs = d.tensor({2, 1, 8, 8}, 90, 165);
    b.labels = {d.label(3), d.label(3)};
    const Tensor eps = d.tensor({2, 8});
    const ScalarFn f = [&](const Tensor& t) {
      AugerinoModel mm = m;
      mm.color.theta_raw = t;
      mm.color.mask = {1, 1};
      return train_loss(mm, b, eps, 1).total;
    };
    return grad_check(f, d.tensor({2}, -4, -3), h);
  });
  return cases;
}

Outcome criterion1() {
  Clock clock;
  Outcome out;
  std::size_t checked = 0;
  for (const auto& c : gradient_cases()) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) worst = std::max(worst, c.error(seed));
    ++checked;
    const bool ok = worst <= c.tol;
    note(c.name + ": max rel err " + fmt("%.3g", worst) + " (tol " + fmt("%.0e", c.tol) + ")" + (ok ? "" : "  FAILED"));
    out.pass &= ok;
  }
  const double t = clock.seconds();
  out.pass &= t < 60.0;
  out.detail = std::to_string(checked) + " op groups x 20 seeds, " + fmt("%.1f s", t) + " (limit 60 s)";
  return out;
}

// ---------------------------------------------------------------------------
// 2. Exponential map.

std::vector<double> series_expm(std::span<const double> a, std::size_t n) {
  std::vector<long double> term(n * n, 0.0L), total(n * n, 0.0L), next(n * n);
  for (std::size_t i = 0; i < n; ++i) term[i * n + i] = total[i * n + i] = 1.0L;
  for (int m = 1; m < 60; ++m) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) next[i * n + j] += term[i * n + k] * static_cast<long double>(a[k * n + j]);
    for (std::size_t i = 0; i < n * n; ++i) {
      term[i] = next[i] / m;
      total[i] += term[i];
    }
  }
  return {total.begin(), total.end()};
}

std::vector<double> closed_form_2d(std::size_t gen, double t) {
  const double c = std::cos(t), s = std::sin(t), e = std::exp(t);
  switch (gen) {
    case 0: return {1, 0, t, 0, 1, 0, 0, 0, 1};
    case 1: return {1, 0, 0, 0, 1, t, 0, 0, 1};
    case 2: return {c, -s, 0, s, c, 0, 0, 0, 1};
    case 3: return {e, 0, 0, 0, e, 0, 0, 0, 1};
    case 4: return {e, 0, 0, 0, 1 / e, 0, 0, 0, 1};
    default: return {std::cosh(t), std::sinh(t), 0, std::sinh(t), std::cosh(t), 0, 0, 0, 1};
  }
}

// Closed forms for the 3D translations, rotations and scale, found by the
// action of the generator on the unit axes.
std::vector<double> closed_form_3d(const std::vector<double>& g, double t) {
  std::vector<double> out(16, 0.0);
  const bool is_translation = g[0] == 0 && g[5] == 0 && g[10] == 0 &&
                              (g[3] != 0 || g[7] != 0 || g[11] != 0);
  const bool is_scale = g[0] == 1 && g[5] == 1 && g[10] == 1;
  if (is_translation) {
    for (std::size_t i = 0; i < 4; ++i) out[i * 4 + i] = 1.0;
    out[3] = t * g[3];
    out[7] = t * g[7];
    out[11] = t * g[11];
    return out;
  }
  if (is_scale) {
    for (std::size_t i = 0; i < 3; ++i) out[i * 4 + i] = std::exp(t);
    out[15] = 1.0;
    return out;
  }
  // rotation: G = K with K³ = −K, so exp(tK) = I + sin t K + (1 − cos t) K²
  std::vector<double> k2(16, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t j = 0; j < 4; ++j) k2[i * 4 + j] += g[i * 4 + k] * g[k * 4 + j];
  for (std::size_t i = 0; i < 16; ++i) out[i] = std::sin(t) * g[i] + (1 - std::cos(t)) * k2[i];
  for (std::size_t i = 0; i < 4; ++i) out[i * 4 + i] += 1.0;
  return out;
}

Outcome criterion2() {
  Clock clock;
  Outcome out;
  double worst_closed = 0.0;
  const auto b2 = GeneratorBasis::affine2d();
  for (std::size_t gen = 0; gen < 6; ++gen) {
    for (int k = -20; k <= 20; ++k) {
      const double t = 0.15 * k;
      std::vector<double> a(b2.matrices[gen]);
      for (auto& v : a) v *= t;
      const Tensor e = expm(Tensor::from({3, 3}, a));
      const auto expect = closed_form_2d(gen, t);
      double scale = 1.0;
      for (double v : expect) scale = std::max(scale, std::abs(v));
      worst_closed = std::max(worst_closed, max_abs_diff(e.values(), expect) / scale);
    }
  }
  const auto b3 = GeneratorBasis::affine3d();
  for (const std::string name : {"tx", "ty", "tz", "rx", "ry", "rz", "scale"}) {
    const auto& g = b3.matrices[b3.index_of(name)];
    for (int k = -20; k <= 20; ++k) {
      const double t = 0.15 * k;
      std::vector<double> a(g);
      for (auto& v : a) v *= t;
      const auto expect = closed_form_3d(g, t);
      double scale = 1.0;
      for (double v : expect) scale = std::max(scale, std::abs(v));
      worst_closed = std::max(worst_closed, max_abs_diff(expm(Tensor::from({4, 4}, a)).values(), expect) / scale);
    }
  }
  note("closed forms (6 planar + 7 spatial generators, t in [-3, 3]): max err " + fmt("%.3g", worst_closed));

  Draw d(2);
  double worst_series = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = trial % 2 == 0 ? 3 : 4;
    Tensor a = d.tensor({n, n});
    double norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < n; ++i) col += std::abs(a.at(i * n + j));
      norm = std::max(norm, col);
    }
    const double target = d.uniform(0.01, 2.0);
    for (auto& v : a.mutable_values()) v *= target / norm;
    worst_series = std::max(worst_series, max_abs_diff(expm(a).values(), series_expm(a.values(), n)));
  }
  note("60-term series, 100 matrices with 1-norm <= 2: max err " + fmt("%.3g", worst_series));
  const double t = clock.seconds();
  out.pass = worst_closed <= 1e-9 && worst_series <= 1e-10 && t < 10.0;
  out.detail = "closed-form err " + fmt("%.2g", worst_closed) + " (tol 1e-9), series err " + fmt("%.2g", worst_series) +
               " (tol 1e-10), " + fmt("%.2f s", t);
  return out;
}

// ---------------------------------------------------------------------------
// 3-5. Width recovery runs.

struct RunSummary {
  TrainResult result;
  double seconds = 0.0;
};

RunSummary train_run(const ExperimentConfig& cfg, const std::string& name) {
  ExperimentConfig c = cfg;
  c.out = run_dir(name).string();
  Clock clock;
  RunSummary s{cmd_train(c), 0.0};
  s.seconds = clock.seconds();
  return s;
}

Outcome criterion3() {
  Outcome out;
  double min_theta = INFINITY, min_acc = INFINITY, max_time = 0.0;
  for (double lambda : {0.01, 0.05, 0.1}) {
    for (std::uint64_t seed : {0, 1, 2}) {
      const RunSummary r = train_run(full_config(lambda, seed), "c3_full_l" + fmt("%g", lambda) + "_s" + std::to_string(seed));
      const double th = rot_width(r.result.model);
      note("lambda " + fmt("%g", lambda) + " seed " + std::to_string(seed) + ": theta_rot " + fmt("%.3f", th) +
           ", test accuracy " + fmt("%.4f", r.result.test_metric) + ", " + fmt("%.0f s", r.seconds));
      min_theta = std::min(min_theta, th);
      min_acc = std::min(min_acc, r.result.test_metric);
      max_time = std::max(max_time, r.seconds);
      out.pass &= th >= 0.9 * pi && r.result.test_metric >= 0.95 && r.seconds <= 1200.0;
    }
  }
  out.detail = "min theta_rot " + fmt("%.3f", min_theta) + " (need >= " + fmt("%.3f", 0.9 * pi) + "), min accuracy " +
               fmt("%.4f", min_acc) + " (need >= 0.95), slowest run " + fmt("%.0f s", max_time);
  return out;
}

struct Stability {
  double worst_angle = 1.0;  // smallest agreement fraction over the angle grid
  double joint = 1.0;        // points whose label never changes on the grid
};

// Agreement of argmax labels between x and R_phi x for phi on a 9-point grid
// over [-limit, limit].
Stability argmax_stability(const AugerinoModel& model, const Dataset& test, double limit) {
  const std::uint64_t seed = 4242;
  const auto base = predict_labels(model, test, model.n_copies_test, seed, 0.0);
  const double n = static_cast<double>(base.size());
  std::vector<bool> stable(base.size(), true);
  Stability out;
  for (int k = -4; k <= 4; ++k) {
    if (k == 0) continue;
    const auto turned = predict_labels(model, test, model.n_copies_test, seed, limit * k / 4.0);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      agree += turned[i] == base[i];
      stable[i] = stable[i] && turned[i] == base[i];
    }
    out.worst_angle = std::min(out.worst_angle, static_cast<double>(agree) / n);
  }
  out.joint = static_cast<double>(std::count(stable.begin(), stable.end(), true)) / n;
  return out;
}

Outcome criterion4() {
  Outcome out;
  std::string detail;
  for (double lambda : {0.01, 0.05, 0.1}) {
    const ExperimentConfig cfg = soft_config(lambda, 0, 0.5);
    const RunSummary r = train_run(cfg, "c4_soft_l" + fmt("%g", lambda));
    const DataPair data = load_data(cfg);
    const double s = data.test.meta.invariance_range;
    const double th = rot_width(r.result.model);
    const Stability st = argmax_stability(r.result.model, data.test, 0.9 * s);
    const double stable = st.worst_angle;
    note("lambda " + fmt("%g", lambda) + ": theta_rot " + fmt("%.3f", th) + ", test accuracy " +
         fmt("%.4f", r.result.test_metric) + ", argmax agreement with R_phi x, |phi| <= 0.9 s*: worst angle " +
         fmt("%.4f", stable) + ", all angles jointly " + fmt("%.4f", st.joint) + ", " + fmt("%.0f s", r.seconds));
    out.pass &= std::abs(th - pi / 4) <= 0.15 && stable >= 0.95 && r.seconds <= 1200.0;
    detail += (detail.empty() ? "" : "; ") + std::string("lambda ") + fmt("%g", lambda) + " theta " + fmt("%.3f", th) +
              " stable " + fmt("%.3f", stable);
  }
  out.detail = detail + " (need theta in pi/4 +- 0.15, per-angle agreement >= 0.95)";
  return out;
}

Outcome criterion5() {
  Outcome out;
  const RunSummary r = train_run(regression_config(), "c5_regression");
  const double th = rot_width(r.result.model);
  note("theta_rot " + fmt("%.4f", th) + ", test angle mse " + fmt("%.5f", r.result.test_metric) + ", " +
       fmt("%.0f s", r.seconds));
  out.pass = th <= 0.05 && r.result.test_metric <= 0.01 && r.seconds <= 1200.0;
  out.detail = "theta_rot " + fmt("%.4f", th) + " (need <= 0.05), test mse " + fmt("%.5f", r.result.test_metric) +
               " rad^2 (need <= 0.01)";
  return out;
}

// ---------------------------------------------------------------------------
// 6. Loss landscape along the rotation width.

Outcome criterion6() {
  Outcome out;
  const ExperimentConfig cfg = soft_config(0.05, 0, 0.5);
  const RunSummary r = train_run(cfg, "c6_soft");
  const DataPair data = load_data(cfg);
  const double boundary = data.train.meta.invariance_range;
  ScanRangeOptions opt;
  for (int k = 0; k <= 64; ++k) opt.grid.push_back(pi * k / 64.0);
  opt.samples = 256;
  opt.lambda = 0.0;
  ExperimentConfig scan_cfg = cfg;
  scan_cfg.out = (g_out / "c6_soft").string();
  const std::string ckpt = (g_out / "c6_soft" / "model.ckpt").string();
  const CsvTable flat = cmd_scan_range(scan_cfg, ckpt, opt);
  fs::rename(g_out / "c6_soft" / "scan_range.csv", g_out / "c6_soft" / "scan_range_lambda0.csv");
  opt.lambda = 0.05;
  const CsvTable reg = cmd_scan_range(scan_cfg, ckpt, opt);
  fs::rename(g_out / "c6_soft" / "scan_range.csv", g_out / "c6_soft" / "scan_range_lambda0.05.csv");

  double lo = INFINITY, hi = -INFINITY;
  for (const auto& row : flat.rows()) {
    if (row[1] <= boundary + 1e-12) {
      lo = std::min(lo, row[2]);
      hi = std::max(hi, row[2]);
    }
  }
  const double variation = hi - lo;
  const double rise = flat.rows().back()[2] - flat.rows().front()[2];
  std::size_t best = 0;
  for (std::size_t i = 1; i < reg.rows().size(); ++i)
    if (reg.rows()[i][3] < reg.rows()[best][3]) best = i;
  const double argmin = reg.rows()[best][1];
  note("trained theta_rot " + fmt("%.3f", rot_width(r.result.model)) + "; lambda 0 scan: variation on [0, " +
       fmt("%.3f", boundary) + "] = " + fmt("%.4g", variation) + ", rise by width pi = " + fmt("%.4g", rise));
  note("lambda 0.05 scan: argmin width " + fmt("%.3f", argmin) + " (boundary " + fmt("%.3f", boundary) + ")");
  const bool flat_ok = variation < 0.1 * rise && rise >= 5.0 * variation;
  const bool argmin_ok = std::abs(argmin - boundary) <= 0.2;
  out.pass = flat_ok && argmin_ok;
  out.detail = "variation " + fmt("%.3g", variation) + " vs rise " + fmt("%.3g", rise) + " (need < 10%), argmin " +
               fmt("%.3f", argmin) + " (need within 0.2 of " + fmt("%.3f", boundary) + ")";
  return out;
}

// ---------------------------------------------------------------------------
// 7. Trajectories from several initial widths.

Outcome criterion7() {
  Outcome out;
  ExperimentConfig cfg = soft_config(0.05, 0, 0.5);
  cfg.out = run_dir("c7_trajectories").string();
  const std::vector<double> inits{0.05, pi / 4, 1.2};
  Clock clock;
  const CsvTable t = cmd_trajectories(cfg, inits);
  std::map<double, std::vector<double>> traces;
  for (const auto& row : t.rows()) traces[row[1]].push_back(row[3]);
  std::string detail;
  for (double init : inits) {
    const auto& tr = traces.at(init);
    const double final_theta = tr.back();
    out.pass &= std::abs(final_theta - pi / 4) <= 0.15;
    note("init " + fmt("%.3f", init) + ": final theta_rot " + fmt("%.3f", final_theta));
    detail += (detail.empty() ? "" : ", ") + fmt("%.3f", init) + " -> " + fmt("%.3f", final_theta);
  }
  // Narrow start: 10-step moving average after the fifth epoch.
  const auto& narrow = traces.at(inits[0]);
  const std::size_t steps_per_epoch = (cfg.train_size + cfg.batch_size - 1) / cfg.batch_size;
  std::size_t drops = 0, windows = 0;
  double prev = -INFINITY;
  for (std::size_t s = 5 * steps_per_epoch + 1; s + 10 <= narrow.size(); s += 10) {
    double m = 0.0;
    for (std::size_t j = s; j < s + 10; ++j) m += narrow[j] / 10.0;
    if (m < prev) ++drops;
    prev = m;
    ++windows;
  }
  note("narrow start: " + std::to_string(drops) + " of " + std::to_string(windows) +
       " 10-step windows after epoch 5 decrease (informational)");
  out.detail = detail + " (need pi/4 +- 0.15), " + fmt("%.0f s", clock.seconds());
  return out;
}

// ---------------------------------------------------------------------------
// 8. Equivariance and segmentation.

Tensor quarter_turns(std::size_t n) {
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) v.insert(v.end(), {0, -1, 0, 1, 0, 0, 0, 0, 1});
  return Tensor::from({n, 3, 3}, v);
}

Outcome criterion8() {
  Outcome out;
  const RunSummary aug = train_run(segmentation_config(true), "c8_seg_augerino");
  const RunSummary base = train_run(segmentation_config(false), "c8_seg_baseline");
  const double acc_aug = aug.result.test_metric, acc_base = base.result.test_metric;
  note("segmentation pixel accuracy: augerino " + fmt("%.4f", acc_aug) + " (theta_rot " +
       fmt("%.3f", rot_width(aug.result.model)) + "), baseline " + fmt("%.4f", acc_base));

  AugerinoModel m = aug.result.model;
  m.aug = AugParams::with_widths({0, 0, pi, 0, 0, 0}, {0, 0, 1, 0, 0, 0});
  const DataPair data = load_data(segmentation_config(true));
  const std::size_t b = 8, copies = 64, n = data.test.item_shape[1];
  std::vector<std::size_t> idx(b);
  for (std::size_t i = 0; i < b; ++i) idx[i] = i;
  const Tensor x = data.test.inputs_of(idx);
  std::vector<double> e(b * copies * m.eps_dim(), 0.0);
  for (std::size_t r = 0; r < b * copies; ++r)
    e[r * m.eps_dim() + kRotationGenerator] = -1.0 + (2.0 * static_cast<double>(r % copies) + 1.0) / copies;
  const Tensor eps = Tensor::from({b * copies, m.eps_dim()}, e);
  const Tensor h = quarter_turns(b);
  NoGradScope no_grad;
  const Tensor lhs = predict_equivariant(m, warp(x, h), eps, copies);
  const Tensor rhs = warp(predict_equivariant(m, x, eps, copies), h);
  const std::size_t c = lhs.dim(1);
  double lo = INFINITY, hi = -INFINITY, worst = 0.0;
  std::size_t interior = 0;
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t ch = 0; ch < c; ++ch)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t xx = 0; xx < n; ++xx) {
          const double u = -1.0 + 2.0 * xx / (n - 1.0), v = -1.0 + 2.0 * y / (n - 1.0);
          if (std::hypot(u, v) > 0.9) continue;
          const std::size_t k = ((i * c + ch) * n + y) * n + xx;
          lo = std::min(lo, rhs.at(k));
          hi = std::max(hi, rhs.at(k));
          worst = std::max(worst, std::abs(lhs.at(k) - rhs.at(k)));
          ++interior;
        }
  const double rel = worst / (hi - lo);
  note("equivariance under an exact quarter turn, 64 stratified rotations, " + std::to_string(interior) +
       " interior values: max |f(hx) - h f(x)| = " + fmt("%.3g", worst) + " = " + fmt("%.3g", rel) +
       " of dynamic range");
  out.pass = rel <= 0.05 && acc_aug >= acc_base - 0.01;
  out.detail = "equivariance error " + fmt("%.2g", rel) + " of range (need <= 0.05), pixel accuracy " +
               fmt("%.4f", acc_aug) + " vs baseline " + fmt("%.4f", acc_base) + " (need >= baseline - 0.01)";
  return out;
}

// ---------------------------------------------------------------------------
// 9. Loss linearity and unbiasedness.

Outcome criterion9() {
  Outcome out;
  ExperimentConfig cfg = soft_config(0.05, 0, 0.8);
  cfg.train_size = 64;
  cfg.test_size = 8;
  const DataPair data = load_data(cfg);
  const AugerinoModel model = build_model(cfg, data.train);
  NoGradScope no_grad;

  double worst_linear = 0.0;
  Rng rng(9);
  for (std::size_t copies : {2, 3, 4, 8}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::size_t> idx(6);
      for (std::size_t i = 0; i < 6; ++i) idx[i] = (trial * 6 + i) % data.train.size();
      const Batch b = data.train.batch(idx);
      const Tensor eps = sample_eps(rng, 6 * copies, model.eps_dim());
      const double joint = train_loss(model, b, eps, copies).data.item();
      double per_copy = 0.0;
      for (std::size_t c = 0; c < copies; ++c) {
        std::vector<double> e;
        for (std::size_t i = 0; i < 6; ++i)
          for (std::size_t k = 0; k < model.eps_dim(); ++k) e.push_back(eps.at((i * copies + c) * model.eps_dim() + k));
        per_copy += train_loss(model, b, Tensor::from({6, model.eps_dim()}, e), 1).data.item();
      }
      worst_linear = std::max(worst_linear, std::abs(joint - per_copy / static_cast<double>(copies)));
    }
  }
  note("linearity: max |loss(mean of copies) - mean of per-copy losses| = " + fmt("%.3g", worst_linear));

  const std::size_t draws = 10000, chunk = 500, points = 4;
  std::vector<std::size_t> idx(points);
  for (std::size_t i = 0; i < points; ++i) idx[i] = i;
  const Batch b = data.train.batch(idx);
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double v = train_loss(model, b, sample_eps(rng, points, model.eps_dim()), 1).data.item();
    s += v;
    s2 += v * v;
  }
  const double mean = s / draws;
  const double se = std::sqrt((s2 - s * s / draws) / (draws - 1) / draws);
  // Many-copy loss: average the per-copy log-probabilities chunk by chunk.
  std::vector<double> avg(points * 4, 0.0);
  for (std::size_t start = 0; start < draws; start += chunk) {
    const Prediction p = predict(model, b.inputs, sample_eps(rng, points * chunk, model.eps_dim()), chunk);
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += p.output.at(i) * static_cast<double>(chunk) / draws;
  }
  const double many = nll_from_logprob(Tensor::from({points, 4}, avg), b.labels).item();
  note("unbiasedness: mean of " + std::to_string(draws) + " one-copy losses " + fmt("%.6f", mean) + " +- " +
       fmt("%.2g", se) + ", " + std::to_string(draws) + "-copy loss " + fmt("%.6f", many));
  out.pass = worst_linear <= 1e-12 && std::abs(mean - many) < 3.0 * se;
  out.detail = "linearity err " + fmt("%.2g", worst_linear) + " (tol 1e-12), |mean - many| = " +
               fmt("%.2g", std::abs(mean - many)) + " vs 3 SE = " + fmt("%.2g", 3.0 * se);
  return out;
}

// ---------------------------------------------------------------------------
// 10. Color operations.

bool bits_equal(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

Outcome criterion10() {
  Outcome out;
  auto bright = [](double c, double t) { return brightness_adjust(Tensor::scalar(c), Tensor::scalar(t)).item(); };
  auto contrast = [](double c, double t) { return contrast_adjust(Tensor::scalar(c), Tensor::scalar(t)).item(); };
  Draw d(10);
  const Tensor x = d.tensor({4, 3, 8, 8}, 0, 255);
  bool fixed_point = true;
  for (int i = 0; i < 1000; ++i) fixed_point &= contrast(128.0, d.uniform(-255, 258.99)) == 128.0;
  const std::vector<std::pair<std::string, bool>> checks{
      {"brightness(100, 50) = 150", bright(100, 50) == 150.0},
      {"brightness(250, 50) = 255", bright(250, 50) == 255.0},
      {"brightness(10, -50) = 0", bright(10, -50) == 0.0},
      {"contrast(228, 128) = 255", contrast(228, 128) == 255.0},
      {"contrast(20, 128) = 0", contrast(20, 128) == 0.0},
      {"F(128) = 259*383/(255*131)", std::abs(contrast_factor(128.0) - 259.0 * 383.0 / (255.0 * 131.0)) < 1e-15},
      {"F(0) = 1", contrast_factor(0.0) == 1.0},
      {"brightness t = 0 is the identity", bits_equal(brightness_adjust(x, Tensor::zeros({4})).values(), x.values())},
      {"contrast t = 0 is the identity", bits_equal(contrast_adjust(x, Tensor::zeros({4})).values(), x.values())},
      {"128 is a contrast fixed point", fixed_point},
  };
  bool examples = true;
  for (const auto& [name, ok] : checks) {
    if (!ok) note("mismatch: " + name);
    examples &= ok;
  }
  bool domain = false;
  try {
    contrast_factor(259.0);
  } catch (const DomainError&) {
    domain = true;
  }
  note(std::string("identity, clamp and fixed-point examples bit-exact: ") + (examples ? "yes" : "no") +
       ", pole rejected: " + (domain ? "yes" : "no"));
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Draw g(seed + 100);
    const Tensor w = g.tensor({2, 1, 4, 4});
    const Tensor xb = g.tensor({2, 1, 4, 4}, 60, 190), tb = g.tensor({2}, -50, 50);
    const Tensor xc = g.tensor({2, 1, 4, 4}, 90, 165), tc = g.tensor({2}, -80, 80);
    worst = std::max({worst, grad_check([&](const Tensor& a) { return sum(mul(brightness_adjust(a, tb), w)); }, xb, 1e-6),
                      grad_check([&](const Tensor& a) { return sum(mul(brightness_adjust(xb, a), w)); }, tb, 1e-6),
                      grad_check([&](const Tensor& a) { return sum(mul(contrast_adjust(a, tc), w)); }, xc, 1e-6),
                      grad_check([&](const Tensor& a) { return sum(mul(contrast_adjust(xc, a), w)); }, tc, 1e-6)});
  }
  note("gradient checks away from the clamp, 20 seeds: max rel err " + fmt("%.3g", worst));
  out.pass = examples && domain && worst <= 1e-4;
  out.detail = std::string("examples ") + (examples && domain ? "exact" : "MISMATCH") + ", gradient err " +
               fmt("%.2g", worst) + " (tol 1e-4)";
  return out;
}

// ---------------------------------------------------------------------------
// 11. Determinism and persistence.

Outcome criterion11() {
  Outcome out;
  ExperimentConfig cfg = soft_config(0.05, 3, 0.5);
  cfg.train_size = 128;
  cfg.test_size = 64;
  cfg.epochs = 3;
  std::vector<std::string> mismatched;
  std::array<fs::path, 2> dirs{run_dir("c11_a"), run_dir("c11_b")};
  for (const auto& d : dirs) {
    ExperimentConfig c = cfg;
    c.out = d.string();
    cmd_train(c);
    cmd_eval(c, (d / "model.ckpt").string(), 4);
    ScanRangeOptions opt;
    opt.grid = {0.0, 0.4, 0.8};
    opt.samples = 64;
    cmd_scan_range(c, (d / "model.ckpt").string(), opt);
    ScanRaysOptions rays;
    rays.rays = 2;
    rays.radii = 3;
    cmd_scan_rays(c, (d / "model.ckpt").string(), rays);
    cmd_trajectories(c, {0.2, 0.6});
  }
  std::size_t compared = 0;
  for (const char* f : {"metrics.csv", "summary.csv", "eval.csv", "sensitivity.csv", "scan_range.csv",
                        "scan_rays.csv", "trajectories.csv", "model.ckpt"}) {
    ++compared;
    if (slurp(dirs[0] / f) != slurp(dirs[1] / f) || slurp(dirs[0] / f).empty()) mismatched.push_back(f);
  }
  note("rerun with identical seeds: " + std::to_string(compared - mismatched.size()) + " of " +
       std::to_string(compared) + " output files byte-identical");

  bool datasets_ok = true;
  for (const char* g : {"full-rotation", "soft-rotation", "rotation-regression", "toy-segmentation"}) {
    const Dataset ds = generate_dataset(g, 16, 16, 11);
    const fs::path p = g_out / "c11_a" / (std::string(g) + ".ds");
    save_dataset(ds, p.string());
    const Dataset back = load_dataset(p.string());
    datasets_ok &= back == ds && bits_equal(back.inputs, ds.inputs) && encode_dataset(back) == encode_dataset(ds);
  }
  const auto ckpt = read_file((dirs[0] / "model.ckpt").string());
  const AugerinoModel m = decode_checkpoint(ckpt);
  bool ckpt_ok = encode_checkpoint(m) == ckpt;
  const AugerinoModel m2 = load_checkpoint((dirs[1] / "model.ckpt").string());
  for (std::size_t i = 0; i < m.network.parameters().size(); ++i)
    ckpt_ok &= bits_equal(m.network.parameters()[i].values(), m2.network.parameters()[i].values());
  ckpt_ok &= bits_equal(m.aug.theta_raw.values(), m2.aug.theta_raw.values());
  note(std::string("dataset round trips bit-exact: ") + (datasets_ok ? "yes" : "no") +
       ", checkpoint round trip bit-exact: " + (ckpt_ok ? "yes" : "no"));
  out.pass = mismatched.empty() && datasets_ok && ckpt_ok;
  std::string list;
  for (const auto& f : mismatched) list += " " + f;
  out.detail = mismatched.empty() ? std::string("all rerun outputs identical, round trips exact")
                                  : "differing outputs:" + list;
  if (!datasets_ok) out.detail += ", dataset round trip differs";
  if (!ckpt_ok) out.detail += ", checkpoint round trip differs";
  return out;
}

struct Entry {
  int id;
  const char* title;
  Outcome (*run)();
};

const std::array<Entry, 11> kCriteria{{
    {1, "gradient correctness", criterion1},
    {2, "exponential map", criterion2},
    {3, "full-invariance recovery", criterion3},
    {4, "soft-invariance recovery", criterion4},
    {5, "invariance avoidance", criterion5},
    {6, "flat-then-sharp loss landscape", criterion6},
    {7, "multi-init convergence", criterion7},
    {8, "equivariance and segmentation", criterion8},
    {9, "loss linearity and unbiasedness", criterion9},
    {10, "color-op contracts", criterion10},
    {11, "determinism and persistence", criterion11},
}};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (a == "--out" && i + 1 < argc) {
      g_out = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N] [--out DIR]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(kCriteria.size())) {
    std::fprintf(stderr, "criterion must be between 1 and %zu\n", kCriteria.size());
    return 2;
  }
  fs::create_directories(g_out);
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    std::printf("criterion %d: %s\n", c.id, c.title);
    std::fflush(stdout);
    Clock clock;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(),
                clock.seconds());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
