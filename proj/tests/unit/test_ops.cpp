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
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "augerino/error.hpp"
#include "augerino/gradcheck.hpp"
#include "augerino/ops.hpp"
#include "helpers.hpp"

using namespace augerino;
using augerino::testing::Gen;

namespace {

// Direct-loop reference cross-correlation on one image.
std::vector<double> conv_reference(const std::vector<double>& x, std::size_t c, std::size_t h, std::size_t w,
                                   const std::vector<double>& k, std::size_t co, int stride, int pad) {
  const std::size_t oh = (h + 2 * pad - 3) / stride + 1;
  const std::size_t ow = (w + 2 * pad - 3) / stride + 1;
  std::vector<double> out(co * oh * ow, 0.0);
  for (std::size_t o = 0; o < co; ++o)
    for (std::size_t i = 0; i < oh; ++i)
      for (std::size_t j = 0; j < ow; ++j) {
        double s = 0.0;
        for (std::size_t ci = 0; ci < c; ++ci)
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
              const long y = static_cast<long>(i) * stride + a - pad;
              const long xx = static_cast<long>(j) * stride + b - pad;
              if (y < 0 || xx < 0 || y >= static_cast<long>(h) || xx >= static_cast<long>(w)) continue;
              s += k[((o * c + ci) * 3 + a) * 3 + b] * x[(ci * h + y) * w + xx];
            }
        out[(o * oh + i) * ow + j] = s;
      }
  return out;
}

// Weighted sum with fixed random weights, so every output element matters.
Tensor weighted(const Tensor& y, std::uint64_t seed) {
  Gen g(seed);
  return sum(mul(y, g.tensor(y.shape())));
}

// Values bounded away from zero, for checks through relu's kink.
Tensor away_from_zero(Gen& gen, Shape shape) {
  std::vector<double> v(shape_numel(shape));
  for (auto& x : v) x = (gen.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * gen.uniform(0.1, 1.0);
  return Tensor::from(std::move(shape), std::move(v));
}

}  // namespace

TEST_SUITE("ops") {
  TEST_CASE("matmul examples and error") {
    const Tensor i2 = Tensor::from({2, 2}, {1, 0, 0, 1});
    const Tensor m = Tensor::from({2, 2}, {1, 2, 3, 4});
    CHECK(matmul(i2, m).values()[3] == 4.0);
    CHECK(augerino::testing::bit_equal(matmul(i2, m).values(), m.values()));
    CHECK(matmul(Tensor::from({1, 2}, {1, 0}), Tensor::from({2, 1}, {0, 1})).item() == 0.0);
    try {
      matmul(Tensor::zeros({2, 3}), Tensor::zeros({2, 3}));
      FAIL("expected DimensionError");
    } catch (const DimensionError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("[2x3]") != std::string::npos);
    }
  }

  TEST_CASE("matmul and bmm agree with naive loops") {
    Gen gen(11);
    const Tensor a = gen.tensor({3, 4});
    const Tensor b = gen.tensor({4, 2});
    const Tensor c = matmul(a, b);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) s += a.at(i * 4 + k) * b.at(k * 2 + j);
        CHECK(std::abs(c.at(i * 2 + j) - s) < 1e-15);
      }
    const Tensor ba = gen.tensor({2, 3, 3});
    const Tensor bb = gen.tensor({2, 3, 3});
    const Tensor bc = bmm(ba, bb);
    for (std::size_t n = 0; n < 2; ++n)
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < 3; ++k) s += ba.at(n * 9 + i * 3 + k) * bb.at(n * 9 + k * 3 + j);
          CHECK(std::abs(bc.at(n * 9 + i * 3 + j) - s) < 1e-15);
        }
  }

  TEST_CASE("conv2d matches the direct reference and its examples") {
    Gen gen(5);
    for (int stride : {1, 2})
      for (int pad : {0, 1}) {
        const Tensor x = gen.tensor({2, 5, 6});
        const Tensor k = gen.tensor({3, 2, 3, 3});
        const Tensor y = conv2d(x, k, stride, pad);
        const std::vector<double> xv(x.values().begin(), x.values().end());
        const std::vector<double> kv(k.values().begin(), k.values().end());
        const auto ref = conv_reference(xv, 2, 5, 6, kv, 3, stride, pad);
        REQUIRE(y.numel() == ref.size());
        CHECK(y.dim(1) == (5 + 2 * pad - 3) / stride + 1);
        CHECK(augerino::testing::max_abs_diff(y.values(), ref) < 1e-14);
      }
    const Tensor x = gen.tensor({1, 4, 4});
    CHECK(sum(square(conv2d(x, Tensor::zeros({2, 1, 3, 3}), 1, 1))).item() == 0.0);
    std::vector<double> delta(9, 0.0);
    delta[4] = 1.0;
    CHECK(augerino::testing::bit_equal(conv2d(x, Tensor::from({1, 1, 3, 3}, delta), 1, 1).values(), x.values()));
    CHECK_THROWS_AS(conv2d(Tensor::zeros({1, 2, 2}), Tensor::zeros({1, 1, 3, 3}), 1, 0), DimensionError);
    CHECK_THROWS_AS(conv2d(x, Tensor::zeros({1, 1, 3, 3}), 3, 1), DomainError);
  }

  TEST_CASE("elementwise examples") {
    const Tensor r = relu(Tensor::from({3}, {-1, 0, 2}));
    CHECK(r.at(0) == 0.0);
    CHECK(r.at(1) == 0.0);
    CHECK(r.at(2) == 2.0);
    reset_tape();
    const Tensor z = Tensor::from({1}, {0.0}, true);
    backward(sum(relu(z)));
    CHECK(z.grad()[0] == 0.0);
    Gen gen(2);
    const Tensor x = gen.tensor({2, 3});
    CHECK(augerino::testing::bit_equal(scale_const(x, 1.0).values(), x.values()));
    CHECK_THROWS_AS(add(x, gen.tensor({3, 2})), DimensionError);
    CHECK(softplus(Tensor::from({1}, {1000.0})).item() == 1000.0);
  }

  TEST_CASE("log_softmax examples") {
    const Tensor a = log_softmax(Tensor::from({1, 2}, {0, 0}));
    CHECK(a.at(0) == doctest::Approx(-std::numbers::ln2).epsilon(1e-15));
    CHECK(a.at(1) == doctest::Approx(-std::numbers::ln2).epsilon(1e-15));
    const Tensor b = log_softmax(Tensor::from({1, 2}, {1000, 0}));
    CHECK(std::abs(b.at(0)) < 1e-300);
    CHECK(b.at(1) == doctest::Approx(-1000.0));
    Gen gen(4);
    for (int seed = 0; seed < 20; ++seed) {
      const Tensor z = gen.tensor({2, 5}, -5, 5);
      const Tensor l = log_softmax(z);
      for (std::size_t r = 0; r < 2; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < 5; ++c) s += std::exp(l.at(r * 5 + c));
        CHECK(std::abs(s - 1.0) < 1e-6);
      }
    }
    const Tensor pix = log_softmax(gen.tensor({2, 3, 2, 2}, -3, 3));
    for (std::size_t n = 0; n < 2; ++n)
      for (std::size_t p = 0; p < 4; ++p) {
        double s = 0.0;
        for (std::size_t c = 0; c < 3; ++c) s += std::exp(pix.at((n * 3 + c) * 4 + p));
        CHECK(std::abs(s - 1.0) < 1e-12);
      }
  }

  TEST_CASE("nll examples, index error and exact linearity") {
    const std::vector<int> zero{0};
    CHECK(nll_from_logprob(Tensor::from({1, 2}, {-std::numbers::ln2, -std::numbers::ln2}), zero).item() ==
          doctest::Approx(0.6931471805599453).epsilon(1e-15));
    const std::vector<int> bad{2};
    CHECK_THROWS_AS(nll_from_logprob(Tensor::zeros({1, 2}), bad), IndexError);
    Gen gen(8);
    for (int seed = 0; seed < 20; ++seed) {
      const Tensor p = log_softmax(gen.tensor({4, 3}, -2, 2));
      const Tensor q = log_softmax(gen.tensor({4, 3}, -2, 2));
      std::vector<int> labels(4);
      for (auto& l : labels) l = static_cast<int>(gen.index(0, 2));
      for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
        const Tensor mix = add(scale_const(p, alpha), scale_const(q, 1.0 - alpha));
        const double lhs = nll_from_logprob(mix, labels).item();
        const double rhs = alpha * nll_from_logprob(p, labels).item() + (1.0 - alpha) * nll_from_logprob(q, labels).item();
        CHECK(std::abs(lhs - rhs) < 1e-12);
      }
    }
  }

  TEST_CASE("mse and masked pixel nll") {
    CHECK(mse_loss(Tensor::from({2}, {1, 1}), Tensor::from({2}, {0, 0})).item() == 1.0);
    CHECK(mse_loss(Tensor::from({2}, {3, 1}), Tensor::from({2}, {3, 1})).item() == 0.0);
    CHECK_THROWS_AS(mse_loss(Tensor::zeros({2}), Tensor::zeros({3})), DimensionError);
    const Tensor logp = Tensor::from({1, 2, 1, 2}, {std::log(0.25), std::log(0.5), std::log(0.75), std::log(0.5)});
    const std::vector<int> labels{1, -1};
    CHECK(masked_pixel_nll(logp, labels).item() == doctest::Approx(-std::log(0.75)).epsilon(1e-15));
  }

  TEST_CASE("reductions and reshaping") {
    const Tensor x = Tensor::from({4, 2}, {1, 2, 3, 4, 5, 6, 7, 8});
    const Tensor g = group_mean(x, 2);
    CHECK(g.shape() == Shape{2, 2});
    CHECK(g.at(0) == 2.0);
    CHECK(g.at(3) == 7.0);
    const std::vector<std::size_t> rows{3, 0, 3};
    const Tensor r = gather_rows(x, rows);
    CHECK(r.at(0) == 7.0);
    CHECK(r.at(2) == 1.0);
    CHECK(r.at(5) == 8.0);
    CHECK(mean(x).item() == 4.5);
    CHECK(transpose(x).at(1) == 3.0);
    CHECK(scale_columns(x, Tensor::from({2}, {10, 0})).at(2) == 30.0);
    CHECK_THROWS_AS(reshape(x, {3, 3}), DimensionError);
  }

  TEST_CASE("gradients of every op over 20 seeds") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Gen gen(seed * 31 + 1);
      const double step = 1e-5;
      const Tensor a34 = gen.tensor({3, 4});
      const Tensor b42 = gen.tensor({4, 2});
      CHECK(grad_check([&](const Tensor& t) { return weighted(matmul(t, b42), seed); }, a34, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(matmul(a34, t), seed); }, b42, step) < 1e-6);
      const Tensor ba = gen.tensor({2, 3, 3});
      const Tensor bb = gen.tensor({2, 3, 3});
      CHECK(grad_check([&](const Tensor& t) { return weighted(bmm(t, bb), seed); }, ba, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(bmm(ba, t), seed); }, bb, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(transpose(t), seed); }, a34, step) < 1e-6);

      const Tensor w = gen.tensor({3, 4});
      const Tensor bias = gen.tensor({3});
      const Tensor xin = gen.tensor({2, 4});
      CHECK(grad_check([&](const Tensor& t) { return weighted(linear(t, w, bias), seed); }, xin, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(linear(xin, t, bias), seed); }, w, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(linear(xin, w, t), seed); }, bias, step) < 1e-6);

      const Tensor img = gen.tensor({2, 5, 5});
      const Tensor ker = gen.tensor({3, 2, 3, 3});
      for (int stride : {1, 2}) {
        CHECK(grad_check([&](const Tensor& t) { return weighted(conv2d(t, ker, stride, 1), seed); }, img, step) < 1e-4);
        CHECK(grad_check([&](const Tensor& t) { return weighted(conv2d(img, t, stride, 0), seed); }, ker, step) < 1e-4);
      }
      const Tensor feat = gen.tensor({2, 3, 2, 2});
      const Tensor cb = gen.tensor({3});
      CHECK(grad_check([&](const Tensor& t) { return weighted(add_channel_bias(feat, t), seed); }, cb, step) < 1e-6);

      const Tensor v = away_from_zero(gen, {4, 4});
      const Tensor u = gen.tensor({4, 4});
      CHECK(grad_check([&](const Tensor& t) { return weighted(relu(t), seed); }, v, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(add_const(t, 0.3), seed); }, u, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(scale_const(t, -1.7), seed); }, u, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(add(t, v), seed); }, u, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(sub(v, t), seed); }, u, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(mul(t, v), seed); }, u, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(square(t), seed); }, u, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(softplus(scale_const(t, 4.0)), seed); }, u, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return mean(t); }, u, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(reshape(t, {2, 8}), seed); }, u, step) < 1e-6);
      const Tensor cols = gen.tensor({4});
      CHECK(grad_check([&](const Tensor& t) { return weighted(scale_columns(u, t), seed); }, cols, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(scale_columns(t, cols), seed); }, u, step) < 1e-6);
      const std::vector<std::size_t> rows{1, 1, 3, 0};
      CHECK(grad_check([&](const Tensor& t) { return weighted(gather_rows(t, rows), seed); }, u, step) < 1e-6);
      CHECK(grad_check([&](const Tensor& t) { return weighted(group_mean(t, 2), seed); }, u, step) < 1e-6);

      const Tensor logits = gen.tensor({3, 4}, -3, 3);
      CHECK(grad_check([&](const Tensor& t) { return weighted(log_softmax(t), seed); }, logits, step) < 1e-6);
      const Tensor pix = gen.tensor({2, 3, 2, 2}, -3, 3);
      CHECK(grad_check([&](const Tensor& t) { return weighted(log_softmax(t), seed); }, pix, step) < 1e-6);
      const std::vector<int> labels{0, 3, 2};
      CHECK(grad_check([&](const Tensor& t) { return nll_from_logprob(t, labels); }, logits, step) < 1e-6);
      const std::vector<int> plabels{0, 1, -1, 2, 2, -1, 0, 1};
      CHECK(grad_check([&](const Tensor& t) { return masked_pixel_nll(t, plabels); }, pix, step) < 1e-6);
      const Tensor target = gen.tensor({3});
      const Tensor pred = gen.tensor({3});
      CHECK(grad_check([&](const Tensor& t) { return mse_loss(t, target); }, pred, step) < 1e-6);
    }
  }

  TEST_CASE("composite relu(Wx) chain passes grad_check") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Gen gen(seed + 100);
      const Tensor w1 = gen.tensor({5, 4});
      const Tensor w2 = gen.tensor({2, 5});
      const Tensor x = gen.tensor({4, 1});
      const ScalarFn f = [&](const Tensor& t) { return sum(square(matmul(w2, relu(matmul(t, x))))); };
      CHECK(grad_check(f, w1, 1e-6) < 1e-4);
    }
  }
}
