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
#include "augerino/checkpoint.hpp"

#include "augerino/binary_io.hpp"
#include "augerino/error.hpp"

namespace augerino {
namespace {

constexpr std::string_view kMagic{"AUGCKPT\0", 8};
constexpr std::uint32_t kEndianMarker = 0x01020304u;

void write_tensor(ByteWriter& w, const Tensor& t) {
  w.u32(static_cast<std::uint32_t>(t.rank()));
  for (auto d : t.shape()) w.u64(d);
  w.f64s(t.values());
}

Tensor read_tensor(ByteReader& r, bool requires_grad) {
  const std::uint32_t rank = r.u32();
  if (rank > 8) throw FormatError("checkpoint: tensor rank " + std::to_string(rank) + " is implausible");
  Shape shape(rank);
  for (auto& d : shape) d = r.u64();
  std::size_t n = 1;
  for (auto d : shape) {
    if (d != 0 && n > r.remaining() / d) throw TruncatedError("checkpoint: tensor larger than the file");
    n *= d;
  }
  return Tensor::from(std::move(shape), r.f64s(n), requires_grad);
}

void write_aug(ByteWriter& w, const AugParams& p) {
  write_tensor(w, p.theta_raw);
  w.u64(p.mask.size());
  w.f64s(p.mask);
}

AugParams read_aug(ByteReader& r) {
  AugParams p;
  p.theta_raw = read_tensor(r, true);
  const std::uint64_t m = r.u64();
  p.mask = r.f64s(m);
  if (p.theta_raw.rank() != 1 || p.mask.size() != p.theta_raw.numel()) {
    throw FormatError("checkpoint: augmentation widths and mask disagree");
  }
  return p;
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const AugerinoModel& model) {
  ByteWriter w;
  w.u32(kEndianMarker);
  w.str(to_string(model.mode));
  w.u64(model.n_copies_train);
  w.u64(model.n_copies_test);
  w.f64(model.lambda);

  const NetworkSpec& spec = model.network.spec();
  w.str(to_string(spec.kind));
  w.u64(spec.input_channels);
  w.u64(spec.input_size);
  w.u64(spec.widths.size());
  for (auto x : spec.widths) w.u64(x);
  w.u64(spec.hidden);
  w.u64(spec.output_dim);
  w.u8(spec.head == OutputHead::LogProbabilities ? 1 : 0);

  w.u64(model.basis.dim);
  w.u64(model.basis.size());
  for (const auto& name : model.basis.names) w.str(name);
  write_aug(w, model.aug);
  w.u8(model.color_aug ? 1 : 0);
  if (model.color_aug) write_aug(w, model.color);

  const auto& params = model.network.parameters();
  w.u64(params.size());
  for (const auto& p : params) write_tensor(w, p);
  return seal(kMagic, kCheckpointVersion, w.bytes());
}

AugerinoModel decode_checkpoint(std::span<const std::uint8_t> bytes) {
  const auto payload = unseal(bytes, kMagic, kCheckpointVersion, "checkpoint");
  ByteReader r(payload);
  if (r.u32() != kEndianMarker) throw FormatError("checkpoint: endianness marker mismatch");
  AugerinoModel model;
  model.mode = parse_model_mode(r.str());
  model.n_copies_train = r.u64();
  model.n_copies_test = r.u64();
  model.lambda = r.f64();

  NetworkSpec spec;
  spec.kind = parse_network_kind(r.str());
  spec.input_channels = r.u64();
  spec.input_size = r.u64();
  const std::uint64_t nw = r.u64();
  if (nw > r.remaining() / 8) throw TruncatedError("checkpoint: layer widths larger than the file");
  spec.widths.resize(nw);
  for (auto& x : spec.widths) x = r.u64();
  spec.hidden = r.u64();
  spec.output_dim = r.u64();
  spec.head = r.u8() != 0 ? OutputHead::LogProbabilities : OutputHead::Linear;

  const std::uint64_t dim = r.u64();
  const std::uint64_t k = r.u64();
  if (dim == 3) {
    model.basis = GeneratorBasis::affine2d();
  } else if (dim == 4) {
    model.basis = GeneratorBasis::affine3d();
  } else {
    throw FormatError("checkpoint: unknown generator basis of dimension " + std::to_string(dim));
  }
  if (k != model.basis.size()) throw FormatError("checkpoint: generator count mismatch");
  for (std::size_t i = 0; i < k; ++i) {
    if (r.str() != model.basis.names[i]) throw FormatError("checkpoint: generator names mismatch");
  }
  model.aug = read_aug(r);
  model.color_aug = r.u8() != 0;
  if (model.color_aug) model.color = read_aug(r);

  const std::uint64_t np = r.u64();
  if (np > r.remaining()) throw TruncatedError("checkpoint: parameter list larger than the file");
  std::vector<Tensor> params;
  for (std::uint64_t i = 0; i < np; ++i) params.push_back(read_tensor(r, true));
  if (r.remaining() != 0) throw FormatError("checkpoint: unread bytes after the parameters");
  model.network = Network::from_parameters(spec, std::move(params));
  model.validate();
  return model;
}

void save_checkpoint(const AugerinoModel& model, const std::string& path) {
  write_file(path, encode_checkpoint(model));
}

AugerinoModel load_checkpoint(const std::string& path) { return decode_checkpoint(read_file(path)); }

}  // namespace augerino
