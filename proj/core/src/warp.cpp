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
#include "augerino/warp.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "augerino/error.hpp"

namespace augerino {

Tensor affine_grid(const Tensor& g, std::size_t height, std::size_t width) {
  if (height < 2 || width < 2) throw DimensionError("affine_grid: image extents must be at least 2×2");
  const bool single = g.rank() == 2;
  if (!((single && g.shape() == Shape{3, 3}) || (g.rank() == 3 && g.dim(1) == 3 && g.dim(2) == 3))) {
    throw DimensionError("affine_grid: expected [3×3] or [B×3×3] transforms, got " + shape_str(g.shape()));
  }
  const std::size_t batch = single ? 1 : g.dim(0);
  const std::size_t plane = height * width;
  std::vector<double> us(width), vs(height);
  for (std::size_t j = 0; j < width; ++j) us[j] = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(width - 1);
  for (std::size_t i = 0; i < height; ++i) vs[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(height - 1);

  std::vector<double> out(batch * plane * 2);
  auto gv = g.values();
  for (std::size_t b = 0; b < batch; ++b) {
    const double* m = &gv[b * 9];
    double* o = &out[b * plane * 2];
    for (std::size_t i = 0; i < height; ++i)
      for (std::size_t j = 0; j < width; ++j) {
        const double u = us[j], v = vs[i];
        o[(i * width + j) * 2] = m[0] * u + m[1] * v + m[2];
        o[(i * width + j) * 2 + 1] = m[3] * u + m[4] * v + m[5];
      }
  }
  Shape shape = single ? Shape{height, width, 2} : Shape{batch, height, width, 2};
  return make_op_result("affine_grid", std::move(shape), std::move(out), {g},
                        [g, batch, height, width, plane, us, vs](std::span<const double> gr) mutable {
                          auto gg = g.mutable_grad();
                          for (std::size_t b = 0; b < batch; ++b) {
                            double* dm = &gg[b * 9];
                            const double* go = &gr[b * plane * 2];
                            for (std::size_t i = 0; i < height; ++i)
                              for (std::size_t j = 0; j < width; ++j) {
                                const double du = go[(i * width + j) * 2], dv = go[(i * width + j) * 2 + 1];
                                const double u = us[j], v = vs[i];
                                dm[0] += du * u;
                                dm[1] += du * v;
                                dm[2] += du;
                                dm[3] += dv * u;
                                dm[4] += dv * v;
                                dm[5] += dv;
                              }
                          }
                        });
}

namespace {

struct SampleGeometry {
  std::size_t batch, channels, h, w, ho, wo;
};

struct Corners {
  long x0, y0;
  double wx, wy;
};

// Positions within 1e-10 of a pixel centre are snapped onto it, so that grids
// built from exact transforms (identity, quarter turns) reproduce pixels exactly.
inline double snap(double p) {
  const double r = std::nearbyint(p);
  return std::abs(p - r) < 1e-10 ? r : p;
}

inline Corners locate(double u, double v, std::size_t h, std::size_t w) {
  const double px = snap((u + 1.0) * 0.5 * static_cast<double>(w - 1));
  const double py = snap((v + 1.0) * 0.5 * static_cast<double>(h - 1));
  const double fx = std::floor(px), fy = std::floor(py);
  return {static_cast<long>(fx), static_cast<long>(fy), px - fx, py - fy};
}

inline bool inside(long x, long y, std::size_t h, std::size_t w) {
  return x >= 0 && y >= 0 && x < static_cast<long>(w) && y < static_cast<long>(h);
}

}  // namespace

Tensor bilinear_sample(const Tensor& x, const Tensor& grid) {
  const bool single = x.rank() == 3;
  if (!single && x.rank() != 4) {
    throw DimensionError("bilinear_sample: image must be [C×H×W] or [B×C×H×W], got " + shape_str(x.shape()));
  }
  SampleGeometry sg{};
  sg.batch = single ? 1 : x.dim(0);
  sg.channels = x.dim(single ? 0 : 1);
  sg.h = x.dim(single ? 1 : 2);
  sg.w = x.dim(single ? 2 : 3);
  const bool grid_ok = single ? (grid.rank() == 3 && grid.dim(2) == 2)
                              : (grid.rank() == 4 && grid.dim(0) == sg.batch && grid.dim(3) == 2);
  if (!grid_ok) {
    throw DimensionError("bilinear_sample: grid " + shape_str(grid.shape()) + " does not match image " +
                         shape_str(x.shape()));
  }
  sg.ho = grid.dim(single ? 0 : 1);
  sg.wo = grid.dim(single ? 1 : 2);
  if (sg.h < 1 || sg.w < 1) throw DimensionError("bilinear_sample: empty image");

  const std::size_t in_plane = sg.h * sg.w, out_plane = sg.ho * sg.wo;
  std::vector<double> out(sg.batch * sg.channels * out_plane, 0.0);
  auto xv = x.values();
  auto gv = grid.values();
  for (std::size_t b = 0; b < sg.batch; ++b)
    for (std::size_t p = 0; p < out_plane; ++p) {
      const auto c = locate(gv[(b * out_plane + p) * 2], gv[(b * out_plane + p) * 2 + 1], sg.h, sg.w);
      const double wts[4] = {(1 - c.wx) * (1 - c.wy), c.wx * (1 - c.wy), (1 - c.wx) * c.wy, c.wx * c.wy};
      const long xs[4] = {c.x0, c.x0 + 1, c.x0, c.x0 + 1};
      const long ys[4] = {c.y0, c.y0, c.y0 + 1, c.y0 + 1};
      for (int q = 0; q < 4; ++q) {
        if (wts[q] == 0.0 || !inside(xs[q], ys[q], sg.h, sg.w)) continue;
        const std::size_t off = static_cast<std::size_t>(ys[q]) * sg.w + static_cast<std::size_t>(xs[q]);
        for (std::size_t ch = 0; ch < sg.channels; ++ch)
          out[(b * sg.channels + ch) * out_plane + p] += wts[q] * xv[(b * sg.channels + ch) * in_plane + off];
      }
    }
  Shape shape = single ? Shape{sg.channels, sg.ho, sg.wo} : Shape{sg.batch, sg.channels, sg.ho, sg.wo};
  return make_op_result("bilinear_sample", std::move(shape), std::move(out), {x, grid},
                        [x, grid, sg](std::span<const double> g) mutable {
                          auto xv = x.values();
                          auto gv = grid.values();
                          const bool dx = x.requires_grad(), dgrid = grid.requires_grad();
                          std::span<double> gx, gg;
                          if (dx) gx = x.mutable_grad();
                          if (dgrid) gg = grid.mutable_grad();
                          const std::size_t in_plane = sg.h * sg.w, out_plane = sg.ho * sg.wo;
                          const double sx = 0.5 * static_cast<double>(sg.w - 1);
                          const double sy = 0.5 * static_cast<double>(sg.h - 1);
                          for (std::size_t b = 0; b < sg.batch; ++b)
                            for (std::size_t p = 0; p < out_plane; ++p) {
                              const std::size_t gi = (b * out_plane + p) * 2;
                              const auto c = locate(gv[gi], gv[gi + 1], sg.h, sg.w);
                              const long xs[4] = {c.x0, c.x0 + 1, c.x0, c.x0 + 1};
                              const long ys[4] = {c.y0, c.y0, c.y0 + 1, c.y0 + 1};
                              const double wts[4] = {(1 - c.wx) * (1 - c.wy), c.wx * (1 - c.wy), (1 - c.wx) * c.wy,
                                                     c.wx * c.wy};
                              // ∂w/∂px and ∂w/∂py for each corner
                              const double dwx[4] = {-(1 - c.wy), (1 - c.wy), -c.wy, c.wy};
                              const double dwy[4] = {-(1 - c.wx), -c.wx, (1 - c.wx), c.wx};
                              double dpx = 0.0, dpy = 0.0;
                              for (int q = 0; q < 4; ++q) {
                                if (!inside(xs[q], ys[q], sg.h, sg.w)) continue;
                                const std::size_t off =
                                    static_cast<std::size_t>(ys[q]) * sg.w + static_cast<std::size_t>(xs[q]);
                                for (std::size_t ch = 0; ch < sg.channels; ++ch) {
                                  const double go = g[(b * sg.channels + ch) * out_plane + p];
                                  const std::size_t xi = (b * sg.channels + ch) * in_plane + off;
                                  if (dx) gx[xi] += wts[q] * go;
                                  if (dgrid) {
                                    dpx += dwx[q] * xv[xi] * go;
                                    dpy += dwy[q] * xv[xi] * go;
                                  }
                                }
                              }
                              if (dgrid) {
                                gg[gi] += dpx * sx;
                                gg[gi + 1] += dpy * sy;
                              }
                            }
                        });
}

Tensor warp(const Tensor& x, const Tensor& g) {
  if (x.rank() < 2) throw DimensionError("warp: image rank too small, got " + shape_str(x.shape()));
  const std::size_t h = x.dim(x.rank() - 2), w = x.dim(x.rank() - 1);
  return bilinear_sample(x, affine_grid(g, h, w));
}

}  // namespace augerino
