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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "augerino/model.hpp"

namespace augerino {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Serializes network weights, θ̃, masks, mode, n_copies and λ. The payload
/// opens with an endianness marker; every field is little-endian.
std::vector<std::uint8_t> encode_checkpoint(const AugerinoModel& model);
AugerinoModel decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const AugerinoModel& model, const std::string& path);
AugerinoModel load_checkpoint(const std::string& path);

}  // namespace augerino
