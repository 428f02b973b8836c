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
#include "augerino/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "augerino/error.hpp"

namespace augerino {
namespace {

void require_rank(const Tensor& t, std::size_t rank, const char* op) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got shape " +
                         shape_str(t.shape()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
  }
}

template <typename F>
Tensor unary(const char* op, const Tensor& x, F&& fwd, double (*dfdx)(double, double)) {
  std::vector<double> out(x.numel());
  auto xv = x.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(xv[i]);
  auto in = x;
  return make_op_result(op, x.shape(), out, {x}, [in, dfdx, out](std::span<const double> g) mutable {
    auto gx = in.mutable_grad();
    auto xv = in.values();
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * dfdx(xv[i], out[i]);
  });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: inner extents differ, " + shape_str(a.shape()) + " · " + shape_str(b.shape()));
  }
  std::vector<double> out(m * n, 0.0);
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      const double* brow = &bv[p * n];
      double* orow = &out[i * n];
      for (std::size_t j = 0; j < n; ++j) orow[j] += aip * brow[j];
    }
  }
  return make_op_result("matmul", {m, n}, std::move(out), {a, b},
                        [a, b, m, k, n](std::span<const double> g) mutable {
                          auto av = a.values();
                          auto bv = b.values();
                          if (a.requires_grad()) {
                            auto ga = a.mutable_grad();
                            for (std::size_t i = 0; i < m; ++i)
                              for (std::size_t p = 0; p < k; ++p) {
                                double s = 0.0;
                                for (std::size_t j = 0; j < n; ++j) s += g[i * n + j] * bv[p * n + j];
                                ga[i * k + p] += s;
                              }
                          }
                          if (b.requires_grad()) {
                            auto gb = b.mutable_grad();
                            for (std::size_t i = 0; i < m; ++i)
                              for (std::size_t p = 0; p < k; ++p) {
                                const double aip = av[i * k + p];
                                for (std::size_t j = 0; j < n; ++j) gb[p * n + j] += aip * g[i * n + j];
                              }
                          }
                        });
}

Tensor bmm(const Tensor& a, const Tensor& b) {
  require_rank(a, 3, "bmm");
  require_rank(b, 3, "bmm");
  const std::size_t batch = a.dim(0), m = a.dim(1), k = a.dim(2), n = b.dim(2);
  if (b.dim(0) != batch || b.dim(1) != k) {
    throw DimensionError("bmm: incompatible shapes " + shape_str(a.shape()) + " · " + shape_str(b.shape()));
  }
  std::vector<double> out(batch * m * n, 0.0);
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t s = 0; s < batch; ++s) {
    const double* as = &av[s * m * k];
    const double* bs = &bv[s * k * n];
    double* os = &out[s * m * n];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t p = 0; p < k; ++p)
        for (std::size_t j = 0; j < n; ++j) os[i * n + j] += as[i * k + p] * bs[p * n + j];
  }
  return make_op_result("bmm", {batch, m, n}, std::move(out), {a, b},
                        [a, b, batch, m, k, n](std::span<const double> g) mutable {
                          auto av = a.values();
                          auto bv = b.values();
                          const bool da = a.requires_grad(), db = b.requires_grad();
                          std::span<double> ga, gb;
                          if (da) ga = a.mutable_grad();
                          if (db) gb = b.mutable_grad();
                          for (std::size_t s = 0; s < batch; ++s) {
                            const double* gs = &g[s * m * n];
                            for (std::size_t i = 0; i < m; ++i)
                              for (std::size_t p = 0; p < k; ++p)
                                for (std::size_t j = 0; j < n; ++j) {
                                  if (da) ga[s * m * k + i * k + p] += gs[i * n + j] * bv[s * k * n + p * n + j];
                                  if (db) gb[s * k * n + p * n + j] += av[s * m * k + i * k + p] * gs[i * n + j];
                                }
                          }
                        });
}

Tensor transpose(const Tensor& a) {
  require_rank(a, 2, "transpose");
  const std::size_t m = a.dim(0), n = a.dim(1);
  std::vector<double> out(m * n);
  auto av = a.values();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = av[i * n + j];
  return make_op_result("transpose", {n, m}, std::move(out), {a}, [a, m, n](std::span<const double> g) mutable {
    auto ga = a.mutable_grad();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += g[j * m + i];
  });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  require_rank(x, 2, "linear");
  require_rank(w, 2, "linear");
  require_rank(b, 1, "linear");
  const std::size_t batch = x.dim(0), in = x.dim(1), outd = w.dim(0);
  if (w.dim(1) != in || b.dim(0) != outd) {
    throw DimensionError("linear: input " + shape_str(x.shape()) + " incompatible with weight " +
                         shape_str(w.shape()) + " and bias " + shape_str(b.shape()));
  }
  std::vector<double> out(batch * outd);
  auto xv = x.values();
  auto wv = w.values();
  auto bv = b.values();
  for (std::size_t n = 0; n < batch; ++n)
    for (std::size_t o = 0; o < outd; ++o) {
      double s = bv[o];
      const double* xr = &xv[n * in];
      const double* wr = &wv[o * in];
      for (std::size_t i = 0; i < in; ++i) s += xr[i] * wr[i];
      out[n * outd + o] = s;
    }
  return make_op_result("linear", {batch, outd}, std::move(out), {x, w, b},
                        [x, w, b, batch, in, outd](std::span<const double> g) mutable {
                          auto xv = x.values();
                          auto wv = w.values();
                          if (x.requires_grad()) {
                            auto gx = x.mutable_grad();
                            for (std::size_t n = 0; n < batch; ++n)
                              for (std::size_t o = 0; o < outd; ++o) {
                                const double go = g[n * outd + o];
                                const double* wr = &wv[o * in];
                                double* gr = &gx[n * in];
                                for (std::size_t i = 0; i < in; ++i) gr[i] += go * wr[i];
                              }
                          }
                          if (w.requires_grad()) {
                            auto gw = w.mutable_grad();
                            for (std::size_t n = 0; n < batch; ++n)
                              for (std::size_t o = 0; o < outd; ++o) {
                                const double go = g[n * outd + o];
                                const double* xr = &xv[n * in];
                                double* gr = &gw[o * in];
                                for (std::size_t i = 0; i < in; ++i) gr[i] += go * xr[i];
                              }
                          }
                          if (b.requires_grad()) {
                            auto gb = b.mutable_grad();
                            for (std::size_t n = 0; n < batch; ++n)
                              for (std::size_t o = 0; o < outd; ++o) gb[o] += g[n * outd + o];
                          }
                        });
}

namespace {

struct ConvGeometry {
  std::size_t batch, cin, h, w, cout, ho, wo;
  int stride, pad;

  // Output columns ox whose source column ox·stride + kx − pad lies in [0, w).
  std::pair<long, long> col_range(int kx) const {
    const long s = stride;
    const long off = static_cast<long>(kx) - pad;
    long lo = off >= 0 ? 0 : (-off + s - 1) / s;
    long hi = (static_cast<long>(w) - 1 - off) / s;
    hi = std::min(hi, static_cast<long>(wo) - 1);
    return {lo, hi};
  }
};

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& k, int stride, int pad) {
  if (x.rank() != 3 && x.rank() != 4) {
    throw DimensionError("conv2d: input must be [C×H×W] or [N×C×H×W], got " + shape_str(x.shape()));
  }
  require_rank(k, 4, "conv2d");
  if (stride != 1 && stride != 2) throw DomainError("conv2d: stride must be 1 or 2");
  if (pad != 0 && pad != 1) throw DomainError("conv2d: pad must be 0 or 1");
  const bool batched = x.rank() == 4;
  ConvGeometry cg{};
  cg.batch = batched ? x.dim(0) : 1;
  cg.cin = x.dim(batched ? 1 : 0);
  cg.h = x.dim(batched ? 2 : 1);
  cg.w = x.dim(batched ? 3 : 2);
  cg.cout = k.dim(0);
  cg.stride = stride;
  cg.pad = pad;
  if (k.dim(1) != cg.cin || k.dim(2) != 3 || k.dim(3) != 3) {
    throw DimensionError("conv2d: kernel " + shape_str(k.shape()) + " incompatible with input " +
                         shape_str(x.shape()));
  }
  const long span_h = static_cast<long>(cg.h) + 2 * pad - 3;
  const long span_w = static_cast<long>(cg.w) + 2 * pad - 3;
  if (cg.h == 0 || cg.w == 0 || span_h < 0 || span_w < 0) {
    throw DimensionError("conv2d: non-positive output extent for input " + shape_str(x.shape()));
  }
  cg.ho = static_cast<std::size_t>(span_h / stride + 1);
  cg.wo = static_cast<std::size_t>(span_w / stride + 1);

  std::vector<double> out(cg.batch * cg.cout * cg.ho * cg.wo, 0.0);
  auto xv = x.values();
  auto kv = k.values();
  const std::size_t in_plane = cg.h * cg.w, out_plane = cg.ho * cg.wo;
  for (std::size_t n = 0; n < cg.batch; ++n)
    for (std::size_t co = 0; co < cg.cout; ++co) {
      double* op = &out[(n * cg.cout + co) * out_plane];
      for (std::size_t ci = 0; ci < cg.cin; ++ci) {
        const double* ip = &xv[(n * cg.cin + ci) * in_plane];
        const double* kp = &kv[(co * cg.cin + ci) * 9];
        for (int ky = 0; ky < 3; ++ky)
          for (int kx = 0; kx < 3; ++kx) {
            const double wgt = kp[ky * 3 + kx];
            const auto [lo, hi] = cg.col_range(kx);
            for (std::size_t oy = 0; oy < cg.ho; ++oy) {
              const long iy = static_cast<long>(oy) * stride + ky - pad;
              if (iy < 0 || iy >= static_cast<long>(cg.h)) continue;
              const double* irow = ip + iy * cg.w;
              double* orow = op + oy * cg.wo;
              if (stride == 1) {
                const long off = kx - pad;
                for (long ox = lo; ox <= hi; ++ox) orow[ox] += wgt * irow[ox + off];
              } else {
                for (long ox = lo; ox <= hi; ++ox) orow[ox] += wgt * irow[ox * stride + kx - pad];
              }
            }
          }
      }
    }
  Shape oshape = batched ? Shape{cg.batch, cg.cout, cg.ho, cg.wo} : Shape{cg.cout, cg.ho, cg.wo};
  return make_op_result("conv2d", std::move(oshape), std::move(out), {x, k}, [x, k, cg](std::span<const double> g) mutable {
    auto xv = x.values();
    auto kv = k.values();
    const bool dx = x.requires_grad(), dk = k.requires_grad();
    std::span<double> gx, gk;
    if (dx) gx = x.mutable_grad();
    if (dk) gk = k.mutable_grad();
    const std::size_t in_plane = cg.h * cg.w, out_plane = cg.ho * cg.wo;
    for (std::size_t n = 0; n < cg.batch; ++n)
      for (std::size_t co = 0; co < cg.cout; ++co) {
        const double* gp = &g[(n * cg.cout + co) * out_plane];
        for (std::size_t ci = 0; ci < cg.cin; ++ci) {
          const std::size_t ibase = (n * cg.cin + ci) * in_plane;
          const std::size_t kbase = (co * cg.cin + ci) * 9;
          for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) {
              const double wgt = kv[kbase + ky * 3 + kx];
              const auto [lo, hi] = cg.col_range(kx);
              const long off = kx - cg.pad;
              double acc = 0.0;
              for (std::size_t oy = 0; oy < cg.ho; ++oy) {
                const long iy = static_cast<long>(oy) * cg.stride + ky - cg.pad;
                if (iy < 0 || iy >= static_cast<long>(cg.h)) continue;
                const double* grow = gp + oy * cg.wo;
                const double* irow = &xv[ibase + iy * cg.w];
                if (dx) {
                  double* girow = &gx[ibase + iy * cg.w];
                  for (long ox = lo; ox <= hi; ++ox) girow[ox * cg.stride + off] += wgt * grow[ox];
                }
                if (dk) {
                  for (long ox = lo; ox <= hi; ++ox) acc += grow[ox] * irow[ox * cg.stride + off];
                }
              }
              if (dk) gk[kbase + ky * 3 + kx] += acc;
            }
        }
      }
  });
}

Tensor add_channel_bias(const Tensor& x, const Tensor& b) {
  if (x.rank() < 2) throw DimensionError("add_channel_bias: input needs rank ≥ 2, got " + shape_str(x.shape()));
  require_rank(b, 1, "add_channel_bias");
  const std::size_t batch = x.dim(0), ch = x.dim(1);
  if (b.dim(0) != ch) {
    throw DimensionError("add_channel_bias: bias " + shape_str(b.shape()) + " vs input " + shape_str(x.shape()));
  }
  const std::size_t inner = x.numel() / std::max<std::size_t>(1, batch * ch);
  std::vector<double> out(x.values().begin(), x.values().end());
  auto bv = b.values();
  for (std::size_t n = 0; n < batch; ++n)
    for (std::size_t c = 0; c < ch; ++c) {
      double* p = &out[(n * ch + c) * inner];
      for (std::size_t i = 0; i < inner; ++i) p[i] += bv[c];
    }
  return make_op_result("add_channel_bias", x.shape(), std::move(out), {x, b},
                        [x, b, batch, ch, inner](std::span<const double> g) mutable {
                          if (x.requires_grad()) {
                            auto gx = x.mutable_grad();
                            for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
                          }
                          if (b.requires_grad()) {
                            auto gb = b.mutable_grad();
                            for (std::size_t n = 0; n < batch; ++n)
                              for (std::size_t c = 0; c < ch; ++c) {
                                const double* p = &g[(n * ch + c) * inner];
                                double s = 0.0;
                                for (std::size_t i = 0; i < inner; ++i) s += p[i];
                                gb[c] += s;
                              }
                          }
                        });
}

Tensor relu(const Tensor& x) {
  return unary(
      "relu", x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Tensor add_const(const Tensor& x, double c) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (double& v : out) v += c;
  return make_op_result("add_const", x.shape(), std::move(out), {x}, [x](std::span<const double> g) mutable {
    auto gx = x.mutable_grad();
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
  });
}

Tensor scale_const(const Tensor& x, double c) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (double& v : out) v *= c;
  return make_op_result("scale_const", x.shape(), std::move(out), {x}, [x, c](std::span<const double> g) mutable {
    auto gx = x.mutable_grad();
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += c * g[i];
  });
}

Tensor add(const Tensor& x, const Tensor& y) {
  require_same_shape(x, y, "add");
  std::vector<double> out(x.numel());
  auto xv = x.values();
  auto yv = y.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] + yv[i];
  return make_op_result("add", x.shape(), std::move(out), {x, y}, [x, y](std::span<const double> g) mutable {
    if (x.requires_grad()) {
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
    if (y.requires_grad()) {
      auto gy = y.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gy[i] += g[i];
    }
  });
}

Tensor sub(const Tensor& x, const Tensor& y) {
  require_same_shape(x, y, "sub");
  std::vector<double> out(x.numel());
  auto xv = x.values();
  auto yv = y.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] - yv[i];
  return make_op_result("sub", x.shape(), std::move(out), {x, y}, [x, y](std::span<const double> g) mutable {
    if (x.requires_grad()) {
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
    if (y.requires_grad()) {
      auto gy = y.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gy[i] -= g[i];
    }
  });
}

Tensor mul(const Tensor& x, const Tensor& y) {
  require_same_shape(x, y, "mul");
  std::vector<double> out(x.numel());
  auto xv = x.values();
  auto yv = y.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] * yv[i];
  return make_op_result("mul", x.shape(), std::move(out), {x, y}, [x, y](std::span<const double> g) mutable {
    auto xv = x.values();
    auto yv = y.values();
    if (x.requires_grad()) {
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * yv[i];
    }
    if (y.requires_grad()) {
      auto gy = y.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gy[i] += g[i] * xv[i];
    }
  });
}

Tensor square(const Tensor& x) {
  return unary(
      "square", x, [](double v) { return v * v; }, [](double v, double) { return 2.0 * v; });
}

Tensor softplus(const Tensor& x) {
  return unary(
      "softplus", x, [](double v) { return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v))); },
      [](double v, double) {
        // logistic sigmoid, evaluated on the non-overflowing branch
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      });
}

Tensor sum(const Tensor& x) {
  double s = 0.0;
  for (double v : x.values()) s += v;
  return make_op_result("sum", {}, {s}, {x}, [x](std::span<const double> g) mutable {
    auto gx = x.mutable_grad();
    for (double& v : gx) v += g[0];
  });
}

Tensor mean(const Tensor& x) {
  if (x.numel() == 0) throw DimensionError("mean: empty tensor");
  const double inv = 1.0 / static_cast<double>(x.numel());
  double s = 0.0;
  for (double v : x.values()) s += v;
  return make_op_result("mean", {}, {s * inv}, {x}, [x, inv](std::span<const double> g) mutable {
    auto gx = x.mutable_grad();
    for (double& v : gx) v += g[0] * inv;
  });
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (shape_numel(shape) != x.numel()) {
    throw DimensionError("reshape: cannot view " + shape_str(x.shape()) + " as " + shape_str(shape));
  }
  std::vector<double> out(x.values().begin(), x.values().end());
  return make_op_result("reshape", std::move(shape), std::move(out), {x}, [x](std::span<const double> g) mutable {
    auto gx = x.mutable_grad();
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
  });
}

Tensor scale_columns(const Tensor& x, const Tensor& v) {
  require_rank(x, 2, "scale_columns");
  require_rank(v, 1, "scale_columns");
  const std::size_t rows = x.dim(0), cols = x.dim(1);
  if (v.dim(0) != cols) {
    throw DimensionError("scale_columns: " + shape_str(x.shape()) + " vs scale " + shape_str(v.shape()));
  }
  std::vector<double> out(x.numel());
  auto xv = x.values();
  auto vv = v.values();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] = xv[r * cols + c] * vv[c];
  return make_op_result("scale_columns", x.shape(), std::move(out), {x, v},
                        [x, v, rows, cols](std::span<const double> g) mutable {
                          auto xv = x.values();
                          auto vv = v.values();
                          if (x.requires_grad()) {
                            auto gx = x.mutable_grad();
                            for (std::size_t r = 0; r < rows; ++r)
                              for (std::size_t c = 0; c < cols; ++c) gx[r * cols + c] += g[r * cols + c] * vv[c];
                          }
                          if (v.requires_grad()) {
                            auto gv = v.mutable_grad();
                            for (std::size_t r = 0; r < rows; ++r)
                              for (std::size_t c = 0; c < cols; ++c) gv[c] += g[r * cols + c] * xv[r * cols + c];
                          }
                        });
}

Tensor gather_rows(const Tensor& x, std::span<const std::size_t> rows) {
  if (x.rank() < 1) throw DimensionError("gather_rows: scalar input");
  const std::size_t n = x.dim(0);
  const std::size_t inner = n ? x.numel() / n : 0;
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  std::vector<double> out(idx.size() * inner);
  auto xv = x.values();
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] >= n) throw IndexError("gather_rows: row " + std::to_string(idx[r]) + " of " + std::to_string(n));
    std::copy_n(&xv[idx[r] * inner], inner, &out[r * inner]);
  }
  Shape shape = x.shape();
  shape[0] = idx.size();
  return make_op_result("gather_rows", std::move(shape), std::move(out), {x},
                        [x, idx, inner](std::span<const double> g) mutable {
                          auto gx = x.mutable_grad();
                          for (std::size_t r = 0; r < idx.size(); ++r)
                            for (std::size_t i = 0; i < inner; ++i) gx[idx[r] * inner + i] += g[r * inner + i];
                        });
}

Tensor group_mean(const Tensor& x, std::size_t group) {
  if (x.rank() < 1 || group == 0 || x.dim(0) % group != 0) {
    throw DimensionError("group_mean: leading extent of " + shape_str(x.shape()) + " not divisible by " +
                         std::to_string(group));
  }
  const std::size_t n = x.dim(0) / group;
  const std::size_t inner = x.dim(0) ? x.numel() / x.dim(0) : 0;
  const double inv = 1.0 / static_cast<double>(group);
  std::vector<double> out(n * inner, 0.0);
  auto xv = x.values();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < group; ++c) {
      const double* src = &xv[(r * group + c) * inner];
      double* dst = &out[r * inner];
      for (std::size_t i = 0; i < inner; ++i) dst[i] += src[i];
    }
  for (double& v : out) v *= inv;
  Shape shape = x.shape();
  shape[0] = n;
  return make_op_result("group_mean", std::move(shape), std::move(out), {x},
                        [x, n, group, inner, inv](std::span<const double> g) mutable {
                          auto gx = x.mutable_grad();
                          for (std::size_t r = 0; r < n; ++r)
                            for (std::size_t c = 0; c < group; ++c)
                              for (std::size_t i = 0; i < inner; ++i)
                                gx[(r * group + c) * inner + i] += g[r * inner + i] * inv;
                        });
}

Tensor log_softmax(const Tensor& z) {
  if (z.rank() != 2 && z.rank() != 4) {
    throw DimensionError("log_softmax: expected [B×C] or [B×C×H×W], got " + shape_str(z.shape()));
  }
  const std::size_t batch = z.dim(0), classes = z.dim(1);
  if (classes < 2) throw DimensionError("log_softmax: needs at least 2 classes, got " + shape_str(z.shape()));
  const std::size_t inner = z.rank() == 4 ? z.dim(2) * z.dim(3) : 1;
  std::vector<double> out(z.numel());
  auto zv = z.values();
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t p = 0; p < inner; ++p) {
      const std::size_t base = b * classes * inner + p;
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < classes; ++c) mx = std::max(mx, zv[base + c * inner]);
      double s = 0.0;
      for (std::size_t c = 0; c < classes; ++c) s += std::exp(zv[base + c * inner] - mx);
      const double lse = mx + std::log(s);
      for (std::size_t c = 0; c < classes; ++c) out[base + c * inner] = zv[base + c * inner] - lse;
    }
  auto logp = out;
  return make_op_result("log_softmax", z.shape(), std::move(out), {z},
                        [z, logp, batch, classes, inner](std::span<const double> g) mutable {
                          auto gz = z.mutable_grad();
                          for (std::size_t b = 0; b < batch; ++b)
                            for (std::size_t p = 0; p < inner; ++p) {
                              const std::size_t base = b * classes * inner + p;
                              double gs = 0.0;
                              for (std::size_t c = 0; c < classes; ++c) gs += g[base + c * inner];
                              for (std::size_t c = 0; c < classes; ++c) {
                                const std::size_t i = base + c * inner;
                                gz[i] += g[i] - std::exp(logp[i]) * gs;
                              }
                            }
                        });
}

Tensor nll_from_logprob(const Tensor& logp, std::span<const int> labels) {
  require_rank(logp, 2, "nll_from_logprob");
  const std::size_t batch = logp.dim(0), classes = logp.dim(1);
  if (labels.size() != batch) {
    throw DimensionError("nll_from_logprob: " + std::to_string(labels.size()) + " labels for batch of " +
                         std::to_string(batch));
  }
  if (batch == 0) throw DimensionError("nll_from_logprob: empty batch");
  std::vector<int> lab(labels.begin(), labels.end());
  auto lv = logp.values();
  double s = 0.0;
  for (std::size_t i = 0; i < batch; ++i) {
    if (lab[i] < 0 || static_cast<std::size_t>(lab[i]) >= classes) {
      throw IndexError("nll_from_logprob: label " + std::to_string(lab[i]) + " outside [0, " +
                       std::to_string(classes) + ")");
    }
    s += lv[i * classes + static_cast<std::size_t>(lab[i])];
  }
  const double inv = 1.0 / static_cast<double>(batch);
  return make_op_result("nll_from_logprob", {}, {-s * inv}, {logp},
                        [logp, lab, classes, inv](std::span<const double> g) mutable {
                          auto gl = logp.mutable_grad();
                          for (std::size_t i = 0; i < lab.size(); ++i)
                            gl[i * classes + static_cast<std::size_t>(lab[i])] -= g[0] * inv;
                        });
}

Tensor masked_pixel_nll(const Tensor& logp, std::span<const int> labels) {
  require_rank(logp, 4, "masked_pixel_nll");
  const std::size_t batch = logp.dim(0), classes = logp.dim(1), plane = logp.dim(2) * logp.dim(3);
  if (labels.size() != batch * plane) {
    throw DimensionError("masked_pixel_nll: " + std::to_string(labels.size()) + " labels for " +
                         shape_str(logp.shape()));
  }
  std::vector<std::size_t> idx;
  auto lv = logp.values();
  double s = 0.0;
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t p = 0; p < plane; ++p) {
      const int y = labels[b * plane + p];
      if (y < 0) continue;
      if (static_cast<std::size_t>(y) >= classes) {
        throw IndexError("masked_pixel_nll: label " + std::to_string(y) + " outside [0, " + std::to_string(classes) +
                         ")");
      }
      const std::size_t i = (b * classes + static_cast<std::size_t>(y)) * plane + p;
      idx.push_back(i);
      s += lv[i];
    }
  const double inv = idx.empty() ? 0.0 : 1.0 / static_cast<double>(idx.size());
  return make_op_result("masked_pixel_nll", {}, {-s * inv}, {logp}, [logp, idx, inv](std::span<const double> g) mutable {
    auto gl = logp.mutable_grad();
    for (std::size_t i : idx) gl[i] -= g[0] * inv;
  });
}

Tensor mse_loss(const Tensor& pred, const Tensor& target) {
  require_same_shape(pred, target, "mse_loss");
  if (pred.numel() == 0) throw DimensionError("mse_loss: empty tensors");
  const double inv = 1.0 / static_cast<double>(pred.numel());
  auto pv = pred.values();
  auto tv = target.values();
  double s = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) s += (pv[i] - tv[i]) * (pv[i] - tv[i]);
  return make_op_result("mse_loss", {}, {s * inv}, {pred, target}, [pred, target, inv](std::span<const double> g) mutable {
    auto pv = pred.values();
    auto tv = target.values();
    if (pred.requires_grad()) {
      auto gp = pred.mutable_grad();
      for (std::size_t i = 0; i < pv.size(); ++i) gp[i] += 2.0 * inv * g[0] * (pv[i] - tv[i]);
    }
    if (target.requires_grad()) {
      auto gt = target.mutable_grad();
      for (std::size_t i = 0; i < pv.size(); ++i) gt[i] -= 2.0 * inv * g[0] * (pv[i] - tv[i]);
    }
  });
}

}  // namespace augerino
