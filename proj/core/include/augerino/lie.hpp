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
#include <random>
#include <string>
#include <vector>

#include "augerino/tensor.hpp"

namespace augerino {

using Rng = std::mt19937_64;

/// Basis of a Lie algebra of affine transformations in homogeneous
/// coordinates. Every matrix has an all-zero last row.
struct GeneratorBasis {
  std::size_t dim = 0;  // matrix side: 3 for 2D images, 4 for 3D points
  std::vector<std::string> names;
  std::vector<std::vector<double>> matrices;  // dim×dim, row-major

  /// tx, ty, rot, scale, squeeze, shear (3×3).
  static GeneratorBasis affine2d();
  /// tx, ty, tz, rx, ry, rz, squeeze_xy, squeeze_yz, scale (4×4).
  static GeneratorBasis affine3d();

  std::size_t size() const { return matrices.size(); }
  /// Index of a generator by name; throws IndexError if absent.
  std::size_t index_of(const std::string& name) const;
  /// Constant [k × dim²] tensor of the flattened generators.
  Tensor as_tensor() const;
};

/// Index of the in-plane rotation generator in GeneratorBasis::affine2d().
inline constexpr std::size_t kRotationGenerator = 2;

/// Unconstrained width parameters of a uniform distribution over generator
/// coefficients. Widths are softplus(theta_raw), multiplied by a fixed 0/1
/// mask so inactive generators contribute exactly zero.
struct AugParams {
  Tensor theta_raw;          // [k], requires_grad
  std::vector<double> mask;  // 1 = learned, 0 = pinned at zero width

  /// All generators active, each at the given initial width.
  static AugParams with_width(std::size_t k, double width);
  static AugParams with_widths(const std::vector<double>& widths, std::vector<double> mask);

  std::size_t size() const { return theta_raw.numel(); }
  /// Differentiable widths θ (on the current tape).
  Tensor widths() const;
  /// Current widths as plain numbers.
  std::vector<double> width_values() const;
};

/// log(1 + exp(θ̃)), overflow-safe. Differentiable.
Tensor softplus_width(const Tensor& theta_raw);
/// Scalar softplus and its inverse.
double softplus_value(double theta_raw);
double softplus_inverse(double width);

/// k i.i.d. draws from U[−1, 1].
std::vector<double> sample_eps(Rng& rng, std::size_t k);
/// [rows × k] constant tensor of U[−1, 1] draws.
Tensor sample_eps(Rng& rng, std::size_t rows, std::size_t k);

/// Matrix exponential of [n×n] or [B×n×n] input by scaling and squaring:
/// s = max(0, ⌈log₂‖A‖₁⌉), degree-12 Taylor polynomial of A/2ˢ, squared s
/// times. The backward pass differentiates through the same arithmetic.
Tensor expm(const Tensor& a);

/// Lie-algebra element Σᵢ epsᵢ·widthᵢ·Gᵢ. `eps` is [k] or [B×k]; the result is
/// [n×n] or [B×n×n].
Tensor algebra_element(const Tensor& widths, const GeneratorBasis& basis, const Tensor& eps);

/// g_ε = exp(Σᵢ εᵢ θᵢ Gᵢ) with explicit widths θ.
Tensor sample_affine(const Tensor& widths, const GeneratorBasis& basis, const Tensor& eps);
Tensor sample_affine(const AugParams& params, const GeneratorBasis& basis, const Tensor& eps);
/// g_ε⁻¹ = exp(−Σᵢ εᵢ θᵢ Gᵢ).
Tensor inverse_of_sample(const Tensor& widths, const GeneratorBasis& basis, const Tensor& eps);
Tensor inverse_of_sample(const AugParams& params, const GeneratorBasis& basis, const Tensor& eps);

/// Gaussian distribution over (angle, x-shift, y-shift).
struct GaussianAugParams {
  Tensor mu;          // [3]
  Tensor scale_tril;  // [3×3]; entries above the diagonal are ignored

  static GaussianAugParams make(std::vector<double> mu, std::vector<double> scale_tril);
};

/// Rotation + normalized translation matrix A(t) for t = μ + L·z. `z` is [3] or
/// [B×3] standard-normal noise. Translations are scaled by 2/(width + height).
Tensor sample_gaussian_affine(const GaussianAugParams& params, const Tensor& z, double width, double height);
Tensor sample_gaussian_affine(const GaussianAugParams& params, Rng& rng, std::size_t count, double width,
                              double height);

/// R(θ) = −Σᵢ θᵢ² on the widths.
Tensor regularizer_neg_l2(const Tensor& widths);
Tensor regularizer_neg_l2(const AugParams& params);

}  // namespace augerino
