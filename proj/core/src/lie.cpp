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
#include "augerino/lie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "augerino/error.hpp"
#include "augerino/ops.hpp"

namespace augerino {

GeneratorBasis GeneratorBasis::affine2d() {
  GeneratorBasis b;
  b.dim = 3;
  b.names = {"tx", "ty", "rot", "scale", "squeeze", "shear"};
  b.matrices = {
      {0, 0, 1, 0, 0, 0, 0, 0, 0},   // translation in x
      {0, 0, 0, 0, 0, 1, 0, 0, 0},   // translation in y
      {0, -1, 0, 1, 0, 0, 0, 0, 0},  // rotation
      {1, 0, 0, 0, 1, 0, 0, 0, 0},   // isotropic scaling
      {1, 0, 0, 0, -1, 0, 0, 0, 0},  // opposite scaling of the two axes
      {0, 1, 0, 1, 0, 0, 0, 0, 0},   // shear
  };
  return b;
}

GeneratorBasis GeneratorBasis::affine3d() {
  GeneratorBasis b;
  b.dim = 4;
  b.names = {"tx", "ty", "tz", "rx", "ry", "rz", "squeeze_xy", "squeeze_yz", "scale"};
  auto m = [](std::initializer_list<std::pair<int, double>> entries) {
    std::vector<double> v(16, 0.0);
    for (auto [i, x] : entries) v[static_cast<std::size_t>(i)] = x;
    return v;
  };
  // entry index = row·4 + col
  b.matrices = {
      m({{3, 1}}),
      m({{7, 1}}),
      m({{11, 1}}),
      m({{6, -1}, {9, 1}}),   // rotation about x: y ↦ z
      m({{2, 1}, {8, -1}}),   // rotation about y: z ↦ x
      m({{1, -1}, {4, 1}}),   // rotation about z: x ↦ y
      m({{0, 1}, {5, -1}}),
      m({{5, 1}, {10, -1}}),
      m({{0, 1}, {5, 1}, {10, 1}}),
  };
  return b;
}

std::size_t GeneratorBasis::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw IndexError("unknown generator '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

Tensor GeneratorBasis::as_tensor() const {
  std::vector<double> flat;
  flat.reserve(size() * dim * dim);
  for (const auto& mat : matrices) flat.insert(flat.end(), mat.begin(), mat.end());
  return Tensor::from({size(), dim * dim}, std::move(flat));
}

double softplus_value(double theta_raw) {
  return std::max(theta_raw, 0.0) + std::log1p(std::exp(-std::abs(theta_raw)));
}

double softplus_inverse(double width) {
  if (!(width > 0.0)) throw DomainError("softplus_inverse: width must be positive");
  // log(exp(w) − 1) = w + log(1 − exp(−w))
  return width + std::log(-std::expm1(-width));
}

Tensor softplus_width(const Tensor& theta_raw) { return softplus(theta_raw); }

AugParams AugParams::with_width(std::size_t k, double width) {
  return with_widths(std::vector<double>(k, width), std::vector<double>(k, 1.0));
}

AugParams AugParams::with_widths(const std::vector<double>& widths, std::vector<double> mask) {
  if (mask.size() != widths.size()) throw DimensionError("AugParams: mask and widths differ in length");
  std::vector<double> raw(widths.size());
  for (std::size_t i = 0; i < widths.size(); ++i) raw[i] = mask[i] != 0.0 ? softplus_inverse(widths[i]) : 0.0;
  AugParams p;
  const std::size_t k = raw.size();
  p.theta_raw = Tensor::from({k}, std::move(raw), true);
  p.mask = std::move(mask);
  return p;
}

Tensor AugParams::widths() const {
  Tensor w = softplus_width(theta_raw);
  if (std::all_of(mask.begin(), mask.end(), [](double m) { return m == 1.0; })) return w;
  return mul(w, Tensor::from({mask.size()}, mask));
}

std::vector<double> AugParams::width_values() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask[i] * softplus_value(theta_raw.at(i));
  return out;
}

std::vector<double> sample_eps(Rng& rng, std::size_t k) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> out(k);
  for (auto& e : out) e = dist(rng);
  return out;
}

Tensor sample_eps(Rng& rng, std::size_t rows, std::size_t k) {
  return Tensor::from({rows, k}, sample_eps(rng, rows * k));
}

namespace {

constexpr int kTaylorDegree = 12;

// c = a·b for n×n row-major blocks
void mm(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < n; ++p) s += a[i * n + p] * b[p * n + j];
      c[i * n + j] = s;
    }
}

// c += a·bᵀ
void mm_add_bt(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < n; ++p) s += a[i * n + p] * b[j * n + p];
      c[i * n + j] += s;
    }
}

// c += aᵀ·b
void mm_add_at(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < n; ++p) s += a[p * n + i] * b[p * n + j];
      c[i * n + j] += s;
    }
}

struct ExpmTrace {
  int squarings = 0;
  std::vector<std::vector<double>> powers;   // B¹ … B¹²
  std::vector<std::vector<double>> squares;  // operand of each squaring
};

ExpmTrace expm_forward(const double* a, double* out, std::size_t n) {
  ExpmTrace tr;
  double norm1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(a[i * n + j]);
    norm1 = std::max(norm1, col);
  }
  if (norm1 > 0.0) tr.squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1))));
  const double scale = std::ldexp(1.0, -tr.squarings);

  const std::size_t nn = n * n;
  std::vector<double> b(nn);
  for (std::size_t i = 0; i < nn; ++i) b[i] = a[i] * scale;
  tr.powers.push_back(b);
  std::vector<double> t(nn, 0.0);
  for (std::size_t i = 0; i < n; ++i) t[i * n + i] = 1.0;
  double fact = 1.0;
  for (int k = 1; k <= kTaylorDegree; ++k) {
    if (k > 1) {
      std::vector<double> next(nn);
      mm(tr.powers.back().data(), b.data(), next.data(), n);
      tr.powers.push_back(std::move(next));
    }
    fact *= k;
    const auto& pk = tr.powers.back();
    for (std::size_t i = 0; i < nn; ++i) t[i] += pk[i] / fact;
  }
  for (int j = 0; j < tr.squarings; ++j) {
    tr.squares.push_back(t);
    std::vector<double> next(nn);
    mm(t.data(), t.data(), next.data(), n);
    t = std::move(next);
  }
  std::copy(t.begin(), t.end(), out);
  return tr;
}

void expm_backward(const ExpmTrace& tr, const double* gout, double* ga, std::size_t n) {
  const std::size_t nn = n * n;
  std::vector<double> g(gout, gout + nn);
  for (int j = tr.squarings - 1; j >= 0; --j) {
    // X_{j+1} = X_j·X_j  ⇒  dX_j = G·X_jᵀ + X_jᵀ·G
    const auto& x = tr.squares[static_cast<std::size_t>(j)];
    std::vector<double> next(nn, 0.0);
    mm_add_bt(g.data(), x.data(), next.data(), n);
    mm_add_at(x.data(), g.data(), next.data(), n);
    g = std::move(next);
  }
  std::vector<std::vector<double>> dp(kTaylorDegree + 1, std::vector<double>(nn, 0.0));
  double fact = 1.0;
  for (int k = 1; k <= kTaylorDegree; ++k) {
    fact *= k;
    for (std::size_t i = 0; i < nn; ++i) dp[static_cast<std::size_t>(k)][i] = g[i] / fact;
  }
  const auto& b = tr.powers[0];
  std::vector<double> db(nn, 0.0);
  for (int k = kTaylorDegree; k >= 2; --k) {
    // P_k = P_{k−1}·B
    const auto& prev = tr.powers[static_cast<std::size_t>(k - 2)];
    auto& dk = dp[static_cast<std::size_t>(k)];
    mm_add_bt(dk.data(), b.data(), dp[static_cast<std::size_t>(k - 1)].data(), n);
    mm_add_at(prev.data(), dk.data(), db.data(), n);
  }
  const double scale = std::ldexp(1.0, -tr.squarings);
  for (std::size_t i = 0; i < nn; ++i) ga[i] += (db[i] + dp[1][i]) * scale;
}

}  // namespace

Tensor expm(const Tensor& a) {
  if (a.rank() != 2 && a.rank() != 3) throw DimensionError("expm: expected [n×n] or [B×n×n], got " + shape_str(a.shape()));
  const std::size_t n = a.dim(a.rank() - 1);
  if (a.dim(a.rank() - 2) != n || n == 0) throw DimensionError("expm: matrices must be square, got " + shape_str(a.shape()));
  for (double v : a.values()) {
    if (!std::isfinite(v)) throw DomainError("expm: non-finite entry");
  }
  const std::size_t batch = a.rank() == 3 ? a.dim(0) : 1;
  const std::size_t nn = n * n;
  std::vector<double> out(batch * nn);
  std::vector<ExpmTrace> traces;
  traces.reserve(batch);
  auto av = a.values();
  for (std::size_t s = 0; s < batch; ++s) traces.push_back(expm_forward(&av[s * nn], &out[s * nn], n));
  if (!a.requires_grad()) traces.clear();
  return make_op_result("expm", a.shape(), std::move(out), {a},
                        [a, traces = std::move(traces), n, nn](std::span<const double> g) mutable {
                          auto ga = a.mutable_grad();
                          for (std::size_t s = 0; s < traces.size(); ++s)
                            expm_backward(traces[s], &g[s * nn], &ga[s * nn], n);
                        });
}

Tensor algebra_element(const Tensor& widths, const GeneratorBasis& basis, const Tensor& eps) {
  const std::size_t k = basis.size();
  if (widths.rank() != 1 || widths.numel() != k) {
    throw DimensionError("sample_affine: " + std::to_string(k) + " generators but widths of shape " +
                         shape_str(widths.shape()));
  }
  const bool single = eps.rank() == 1;
  if (!((single && eps.numel() == k) || (eps.rank() == 2 && eps.dim(1) == k))) {
    throw DimensionError("sample_affine: " + std::to_string(k) + " generators but eps of shape " +
                         shape_str(eps.shape()));
  }
  const std::size_t rows = single ? 1 : eps.dim(0);
  const Tensor e2 = single ? reshape(eps, {1, k}) : eps;
  const Tensor flat = matmul(scale_columns(e2, widths), basis.as_tensor());
  return single ? reshape(flat, {basis.dim, basis.dim}) : reshape(flat, {rows, basis.dim, basis.dim});
}

Tensor sample_affine(const Tensor& widths, const GeneratorBasis& basis, const Tensor& eps) {
  return expm(algebra_element(widths, basis, eps));
}

Tensor sample_affine(const AugParams& params, const GeneratorBasis& basis, const Tensor& eps) {
  return sample_affine(params.widths(), basis, eps);
}

Tensor inverse_of_sample(const Tensor& widths, const GeneratorBasis& basis, const Tensor& eps) {
  return expm(scale_const(algebra_element(widths, basis, eps), -1.0));
}

Tensor inverse_of_sample(const AugParams& params, const GeneratorBasis& basis, const Tensor& eps) {
  return inverse_of_sample(params.widths(), basis, eps);
}

GaussianAugParams GaussianAugParams::make(std::vector<double> mu, std::vector<double> scale_tril) {
  if (mu.size() != 3 || scale_tril.size() != 9) {
    throw DimensionError("GaussianAugParams: expected 3 means and a 3×3 scale factor");
  }
  GaussianAugParams p;
  p.mu = Tensor::from({3}, std::move(mu), true);
  p.scale_tril = Tensor::from({3, 3}, std::move(scale_tril), true);
  return p;
}

namespace {

// [B×3] (angle, tx, ty) → [B×3×3] homogeneous rotation + translation.
Tensor rotation_translation(const Tensor& t, double width, double height) {
  const std::size_t batch = t.dim(0);
  const double c = 2.0 / (width + height);
  std::vector<double> out(batch * 9, 0.0);
  auto tv = t.values();
  for (std::size_t b = 0; b < batch; ++b) {
    const double a = tv[b * 3], co = std::cos(a), si = std::sin(a);
    double* m = &out[b * 9];
    m[0] = co;
    m[1] = -si;
    m[2] = c * tv[b * 3 + 1];
    m[3] = si;
    m[4] = co;
    m[5] = c * tv[b * 3 + 2];
    m[8] = 1.0;
  }
  return make_op_result("rotation_translation", {batch, 3, 3}, std::move(out), {t},
                        [t, batch, c](std::span<const double> g) mutable {
                          auto tv = t.values();
                          auto gt = t.mutable_grad();
                          for (std::size_t b = 0; b < batch; ++b) {
                            const double a = tv[b * 3], co = std::cos(a), si = std::sin(a);
                            const double* gm = &g[b * 9];
                            gt[b * 3] += -si * gm[0] - co * gm[1] + co * gm[3] - si * gm[4];
                            gt[b * 3 + 1] += c * gm[2];
                            gt[b * 3 + 2] += c * gm[5];
                          }
                        });
}

}  // namespace

Tensor sample_gaussian_affine(const GaussianAugParams& params, const Tensor& z, double width, double height) {
  if (params.mu.numel() != 3 || params.scale_tril.shape() != Shape{3, 3}) {
    throw DimensionError("sample_gaussian_affine: malformed parameters");
  }
  auto lv = params.scale_tril.values();
  for (int i = 0; i < 3; ++i) {
    if (lv[static_cast<std::size_t>(i * 4)] < 0.0) {
      throw DomainError("sample_gaussian_affine: scale_tril has a negative diagonal entry");
    }
  }
  const bool single = z.rank() == 1;
  if (!((single && z.numel() == 3) || (z.rank() == 2 && z.dim(1) == 3))) {
    throw DimensionError("sample_gaussian_affine: noise must be [3] or [B×3], got " + shape_str(z.shape()));
  }
  const Tensor z2 = single ? reshape(z, {1, 3}) : z;
  const Tensor tril_mask = Tensor::from({3, 3}, {1, 0, 0, 1, 1, 0, 1, 1, 1});
  const Tensor lower = mul(params.scale_tril, tril_mask);
  const Tensor t = add_channel_bias(matmul(z2, transpose(lower)), params.mu);
  const Tensor a = rotation_translation(t, width, height);
  return single ? reshape(a, {3, 3}) : a;
}

Tensor sample_gaussian_affine(const GaussianAugParams& params, Rng& rng, std::size_t count, double width,
                              double height) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(count * 3);
  for (auto& v : z) v = normal(rng);
  return sample_gaussian_affine(params, Tensor::from({count, 3}, std::move(z)), width, height);
}

Tensor regularizer_neg_l2(const Tensor& widths) { return scale_const(sum(square(widths)), -1.0); }

Tensor regularizer_neg_l2(const AugParams& params) { return regularizer_neg_l2(params.widths()); }

}  // namespace augerino
