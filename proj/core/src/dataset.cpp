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
#include "augerino/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "augerino/binary_io.hpp"
#include "augerino/error.hpp"

namespace augerino {
namespace {

using std::numbers::pi;

struct Segment {
  double x0, y0, x1, y1;
};

double segment_distance(const Segment& s, double u, double v) {
  const double dx = s.x1 - s.x0;
  const double dy = s.y1 - s.y0;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((u - s.x0) * dx + (v - s.y0) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(u - (s.x0 + t * dx), v - (s.y0 + t * dy));
}

double polyline_distance(std::span<const Segment> segs, double u, double v) {
  double d = INFINITY;
  for (const auto& s : segs) d = std::min(d, segment_distance(s, u, v));
  return d;
}

// Stroke of half-width r with a one-pixel linear edge.
double stroke(double distance, double r, double pixel) { return std::clamp((r - distance) / pixel + 0.5, 0.0, 1.0); }

constexpr double kStroke = 0.15;

// Templates live inside the disk of radius 0.75, so no rotation clips them.
const std::array<std::vector<Segment>, 4>& full_glyphs() {
  static const std::array<std::vector<Segment>, 4> glyphs{{
      {{-0.4, -0.5, -0.4, 0.5}, {-0.4, 0.5, 0.4, 0.5}},                          // L
      {{-0.45, -0.45, 0.45, -0.45}, {0.0, -0.45, 0.0, 0.55}},                    // T
      {},                                                                        // ring
      {{-0.4, -0.45, 0.4, -0.45}, {0.4, -0.45, -0.4, 0.45}, {-0.4, 0.45, 0.4, 0.45}},  // Z
  }};
  return glyphs;
}

const std::array<std::vector<Segment>, 2>& sprites() {
  static const std::array<std::vector<Segment>, 2> s{{
      {{-0.3, -0.5, -0.3, 0.5}, {-0.3, -0.5, 0.35, -0.5}, {-0.3, 0.0, 0.2, 0.0}},                          // F
      {{-0.3, -0.5, -0.3, 0.5}, {-0.3, -0.5, 0.25, -0.5}, {0.25, -0.5, 0.25, 0.0}, {0.25, 0.0, -0.3, 0.0}},  // P
  }};
  return s;
}

struct FaceBase {
  double eye_dx, eye_sigma, mouth_half, nose;
};

constexpr std::array<FaceBase, 3> kFaces{{
    {0.36, 0.20, 0.32, 0.0},
    {0.40, 0.18, 0.24, 0.6},
    {0.32, 0.22, 0.40, 0.3},
}};

double gauss2(double u, double v, double cu, double cv, double su, double sv) {
  const double a = (u - cu) / su;
  const double b = (v - cv) / sv;
  return std::exp(-0.5 * (a * a + b * b));
}

double face_value(int base, double u, double v) {
  const FaceBase& f = kFaces.at(static_cast<std::size_t>(base));
  double s = gauss2(u, v, -f.eye_dx, -0.25, f.eye_sigma, f.eye_sigma) +
             gauss2(u, v, f.eye_dx, -0.25, f.eye_sigma, f.eye_sigma) +
             gauss2(u, v, 0.0, 0.4, f.mouth_half, 0.15) + f.nose * gauss2(u, v, 0.0, 0.05, 0.1, 0.18);
  return 1.0 - std::exp(-1.5 * s);
}

std::size_t checked_size(std::size_t size, std::size_t minimum, const char* what) {
  if (size < minimum) {
    throw DomainError(std::string(what) + ": image size must be at least " + std::to_string(minimum));
  }
  return size;
}

double coord(std::size_t i, std::size_t size) { return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(size - 1); }

// out[i, j] = value(R(−angle)·(u_j, v_i)).
template <class F>
void render_into(double* out, std::size_t size, double angle, F&& value) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (std::size_t i = 0; i < size; ++i) {
    const double v = coord(i, size);
    for (std::size_t j = 0; j < size; ++j) {
      const double u = coord(j, size);
      out[i * size + j] = value(c * u + s * v, -s * u + c * v);
    }
  }
}

Dataset empty_dataset(TaskKind task, const std::string& generator, std::size_t n, std::size_t size,
                      std::uint64_t seed, double s_star, std::size_t classes) {
  if (n == 0) throw DomainError(generator + ": n must be at least 1");
  Dataset ds;
  ds.task = task;
  ds.item_shape = {1, size, size};
  ds.inputs.assign(n * size * size, 0.0);
  ds.angles.resize(n);
  ds.meta = {generator, seed, n, size, s_star, classes};
  return ds;
}

}  // namespace

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::Classification:
      return "classification";
    case TaskKind::Regression:
      return "regression";
    case TaskKind::Segmentation:
      return "segmentation";
  }
  return "classification";
}

int soft_rotation_half(double angle) { return std::cos(angle) >= 0.0 ? 0 : 1; }

double glyph_value(const std::string& generator, int shape, double u, double v, double pixel) {
  if (generator == "full-rotation") {
    if (shape < 0 || shape > 3) throw IndexError("full-rotation: glyph index out of range");
    if (shape == 2) return stroke(std::abs(std::hypot(u, v) - 0.45), kStroke, pixel);
    return stroke(polyline_distance(full_glyphs()[static_cast<std::size_t>(shape)], u, v), kStroke, pixel);
  }
  if (generator == "soft-rotation") {
    if (shape < 0 || shape > 1) throw IndexError("soft-rotation: sprite index out of range");
    return stroke(polyline_distance(sprites()[static_cast<std::size_t>(shape)], u, v), kStroke, pixel);
  }
  if (generator == "rotation-regression") {
    if (shape < 0 || shape >= static_cast<int>(kFaces.size())) throw IndexError("rotation-regression: base index out of range");
    return face_value(shape, u, v);
  }
  throw ConfigError("no templates for generator '" + generator + "'");
}

std::vector<double> render_rotated(const std::string& generator, int shape, double angle, std::size_t size) {
  checked_size(size, 2, generator.c_str());
  const double pixel = 2.0 / static_cast<double>(size - 1);
  std::vector<double> out(size * size);
  render_into(out.data(), size, angle, [&](double u, double v) { return glyph_value(generator, shape, u, v, pixel); });
  return out;
}

Dataset gen_full_rotation(std::size_t n, std::size_t size, std::uint64_t seed) {
  checked_size(size, 16, "full-rotation");
  Dataset ds = empty_dataset(TaskKind::Classification, "full-rotation", n, size, seed, pi, 4);
  Rng rng(seed);
  std::uniform_int_distribution<int> cls(0, 3);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * pi);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels[i] = cls(rng);
    ds.angles[i] = ang(rng);
    const auto img = render_rotated("full-rotation", ds.labels[i], ds.angles[i], size);
    std::copy(img.begin(), img.end(), ds.inputs.begin() + static_cast<std::ptrdiff_t>(i * size * size));
  }
  return ds;
}

Dataset gen_soft_rotation(std::size_t n, std::size_t size, std::uint64_t seed) {
  checked_size(size, 8, "soft-rotation");
  Dataset ds = empty_dataset(TaskKind::Classification, "soft-rotation", n, size, seed, pi / 4, 4);
  Rng rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> offset(-pi / 4, pi / 4);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int sprite = coin(rng);
    const int half = coin(rng);
    ds.angles[i] = offset(rng) + (half == 1 ? pi : 0.0);
    ds.labels[i] = 2 * sprite + half;
    const auto img = render_rotated("soft-rotation", sprite, ds.angles[i], size);
    std::copy(img.begin(), img.end(), ds.inputs.begin() + static_cast<std::ptrdiff_t>(i * size * size));
  }
  return ds;
}

Dataset gen_rotation_regression(std::size_t n, std::size_t size, std::uint64_t seed) {
  checked_size(size, 8, "rotation-regression");
  Dataset ds = empty_dataset(TaskKind::Regression, "rotation-regression", n, size, seed, 0.0, 0);
  Rng rng(seed);
  std::uniform_int_distribution<int> base(0, static_cast<int>(kFaces.size()) - 1);
  std::uniform_real_distribution<double> ang(-pi / 2, pi / 2);
  ds.targets.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int b = base(rng);
    ds.angles[i] = ang(rng);
    ds.targets[i] = ds.angles[i];
    const auto img = render_rotated("rotation-regression", b, ds.angles[i], size);
    std::copy(img.begin(), img.end(), ds.inputs.begin() + static_cast<std::ptrdiff_t>(i * size * size));
  }
  return ds;
}

Dataset gen_toy_segmentation(std::size_t n, std::size_t size, std::uint64_t seed) {
  checked_size(size, 8, "toy-segmentation");
  Dataset ds = empty_dataset(TaskKind::Segmentation, "toy-segmentation", n, size, seed, pi, 3);
  Rng rng(seed);
  std::uniform_int_distribution<int> count(2, 3);
  std::uniform_int_distribution<int> kind(1, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * pi);
  struct Object {
    int cls;
    double cx, cy, half;
    double extent() const { return cls == 1 ? half : half * std::sqrt(2.0); }
    bool contains(double u, double v) const {
      if (cls == 1) return std::hypot(u - cx, v - cy) <= half;
      return std::abs(u - cx) <= half && std::abs(v - cy) <= half;
    }
  };
  ds.labels.assign(n * size * size, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Object> objects;
    const int want = count(rng);
    for (int attempt = 0; attempt < 200 && static_cast<int>(objects.size()) < want; ++attempt) {
      Object o{kind(rng), 0.0, 0.0, 0.2 + 0.12 * unit(rng)};
      const double reach = 0.95 - o.extent();
      const double r = reach * std::sqrt(unit(rng));
      const double phi = 2.0 * pi * unit(rng);
      o.cx = r * std::cos(phi);
      o.cy = r * std::sin(phi);
      const bool clear = std::none_of(objects.begin(), objects.end(), [&](const Object& p) {
        return std::hypot(o.cx - p.cx, o.cy - p.cy) < o.extent() + p.extent() + 0.05;
      });
      if (clear) objects.push_back(o);
    }
    ds.angles[i] = ang(rng);
    const double c = std::cos(ds.angles[i]);
    const double s = std::sin(ds.angles[i]);
    double* img = ds.inputs.data() + i * size * size;
    int* mask = ds.labels.data() + i * size * size;
    for (std::size_t y = 0; y < size; ++y) {
      const double v = coord(y, size);
      for (std::size_t x = 0; x < size; ++x) {
        const double u = coord(x, size);
        const double qu = c * u + s * v;
        const double qv = -s * u + c * v;
        const std::size_t p = y * size + x;
        if (std::abs(qu) > 1.0 + 1e-12 || std::abs(qv) > 1.0 + 1e-12) {
          mask[p] = -1;
          continue;
        }
        for (const auto& o : objects) {
          if (o.contains(qu, qv)) {
            mask[p] = o.cls;
            img[p] = 1.0;
          }
        }
      }
    }
  }
  return ds;
}

Dataset generate_dataset(const std::string& generator, std::size_t n, std::size_t size, std::uint64_t seed) {
  if (generator == "full-rotation") return gen_full_rotation(n, size, seed);
  if (generator == "soft-rotation") return gen_soft_rotation(n, size, seed);
  if (generator == "rotation-regression") return gen_rotation_regression(n, size, seed);
  if (generator == "toy-segmentation") return gen_toy_segmentation(n, size, seed);
  throw ConfigError("unknown dataset generator '" + generator + "'");
}

Tensor Dataset::inputs_of(std::span<const std::size_t> indices, double scale) const {
  const std::size_t m = item_numel();
  std::vector<double> out(indices.size() * m);
  for (std::size_t b = 0; b < indices.size(); ++b) {
    const std::size_t i = indices[b];
    if (i >= size()) throw IndexError("dataset: item " + std::to_string(i) + " out of range");
    for (std::size_t k = 0; k < m; ++k) out[b * m + k] = inputs[i * m + k] * scale;
  }
  Shape shape{indices.size()};
  shape.insert(shape.end(), item_shape.begin(), item_shape.end());
  return Tensor::from(std::move(shape), std::move(out));
}

Batch Dataset::batch(std::span<const std::size_t> indices, double scale) const {
  Batch b;
  b.inputs = inputs_of(indices, scale);
  switch (task) {
    case TaskKind::Classification:
      for (auto i : indices) b.labels.push_back(labels[i]);
      break;
    case TaskKind::Segmentation: {
      const std::size_t hw = item_shape[1] * item_shape[2];
      for (auto i : indices) b.labels.insert(b.labels.end(), labels.begin() + i * hw, labels.begin() + (i + 1) * hw);
      break;
    }
    case TaskKind::Regression: {
      std::vector<double> t;
      for (auto i : indices) t.push_back(targets[i]);
      b.targets = Tensor::from({indices.size(), 1}, std::move(t));
      break;
    }
  }
  return b;
}

namespace {

constexpr std::string_view kMagic{"AUGDSET\0", 8};

void write_ints(ByteWriter& w, const std::vector<int>& v) {
  w.u64(v.size());
  for (int x : v) w.f64(static_cast<double>(x));
}

std::vector<int> read_ints(ByteReader& r) {
  const auto d = r.f64s(r.u64());
  std::vector<int> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] != std::floor(d[i]) || std::abs(d[i]) > 1e9) throw FormatError("dataset: non-integer label");
    out[i] = static_cast<int>(d[i]);
  }
  return out;
}

void write_reals(ByteWriter& w, const std::vector<double>& v) {
  w.u64(v.size());
  w.f64s(v);
}

}  // namespace

std::vector<std::uint8_t> encode_dataset(const Dataset& ds) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(ds.task));
  w.str(ds.meta.generator);
  w.u64(ds.meta.seed);
  w.u64(ds.meta.n);
  w.u64(ds.meta.size);
  w.f64(ds.meta.invariance_range);
  w.u64(ds.meta.num_classes);
  w.u32(static_cast<std::uint32_t>(ds.item_shape.size()));
  for (auto d : ds.item_shape) w.u64(d);
  write_reals(w, ds.inputs);
  write_ints(w, ds.labels);
  write_reals(w, ds.targets);
  write_reals(w, ds.angles);
  return seal(kMagic, kDatasetVersion, w.bytes());
}

Dataset decode_dataset(std::span<const std::uint8_t> bytes) {
  const auto payload = unseal(bytes, kMagic, kDatasetVersion, "dataset");
  ByteReader r(payload);
  Dataset ds;
  const std::uint8_t task = r.u8();
  if (task > 2) throw FormatError("dataset: unknown task kind");
  ds.task = static_cast<TaskKind>(task);
  ds.meta.generator = r.str();
  ds.meta.seed = r.u64();
  ds.meta.n = r.u64();
  ds.meta.size = r.u64();
  ds.meta.invariance_range = r.f64();
  ds.meta.num_classes = r.u64();
  const std::uint32_t rank = r.u32();
  if (rank != 3) throw FormatError("dataset: items must be [C×H×W]");
  ds.item_shape.resize(rank);
  for (auto& d : ds.item_shape) d = r.u64();
  ds.inputs = r.f64s(r.u64());
  ds.labels = read_ints(r);
  ds.targets = r.f64s(r.u64());
  ds.angles = r.f64s(r.u64());
  if (r.remaining() != 0) throw FormatError("dataset: unread bytes after the payload");
  const std::size_t n = ds.meta.n;
  const std::size_t m = ds.item_numel();
  const std::size_t hw = ds.item_shape[1] * ds.item_shape[2];
  const bool labels_ok = ds.task == TaskKind::Classification  ? ds.labels.size() == n
                         : ds.task == TaskKind::Segmentation ? ds.labels.size() == n * hw
                                                             : ds.labels.empty();
  const bool targets_ok = ds.task == TaskKind::Regression ? ds.targets.size() == n : ds.targets.empty();
  if (ds.inputs.size() != n * m || !labels_ok || !targets_ok || ds.angles.size() != n) {
    throw FormatError("dataset: array lengths disagree with the item count");
  }
  return ds;
}

std::string dataset_sidecar(const Dataset& ds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", ds.meta.invariance_range);
  std::ostringstream out;
  out << "format_version=" << kDatasetVersion << "\n"
      << "generator=" << ds.meta.generator << "\n"
      << "task=" << to_string(ds.task) << "\n"
      << "seed=" << ds.meta.seed << "\n"
      << "n=" << ds.meta.n << "\n"
      << "size=" << ds.meta.size << "\n"
      << "channels=" << ds.item_shape.at(0) << "\n"
      << "invariance_range=" << buf << "\n"
      << "num_classes=" << ds.meta.num_classes << "\n";
  return out.str();
}

void save_dataset(const Dataset& ds, const std::string& path) {
  write_file(path, encode_dataset(ds));
  const std::string side = dataset_sidecar(ds);
  write_file(path + ".meta", {reinterpret_cast<const std::uint8_t*>(side.data()), side.size()});
}

Dataset load_dataset(const std::string& path) { return decode_dataset(read_file(path)); }

}  // namespace augerino
