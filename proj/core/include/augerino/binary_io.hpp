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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace augerino {

/// Appends little-endian fields to a byte buffer.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  /// IEEE-754 bit pattern, so values round-trip exactly.
  void f64(double v);
  void f64s(std::span<const double> v);
  /// u32 length followed by the raw bytes.
  void str(std::string_view s);
  void raw(std::span<const std::uint8_t> bytes);

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

/// Reads little-endian fields; running past the end throws TruncatedError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64();
  std::vector<double> f64s(std::size_t count);
  std::string str();

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

/// zlib CRC-32 of the bytes.
std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);

/// Frames a payload as: 8-byte magic, u32 version, u64 payload length,
/// payload, u32 CRC-32 of everything before it.
std::vector<std::uint8_t> seal(std::string_view magic, std::uint32_t version, std::span<const std::uint8_t> payload);

/// Inverse of seal. Checks, in order: magic (FormatError), version
/// (VersionError), length (TruncatedError, or FormatError for trailing
/// bytes), CRC (ChecksumError). Returns the payload.
std::vector<std::uint8_t> unseal(std::span<const std::uint8_t> file, std::string_view magic,
                                 std::uint32_t version, const std::string& what);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace augerino
