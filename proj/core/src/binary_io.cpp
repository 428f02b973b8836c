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
#include "augerino/binary_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "augerino/error.hpp"

namespace augerino {

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::f64s(std::span<const double> v) {
  bytes_.reserve(bytes_.size() + 8 * v.size());
  for (double x : v) f64(x);
}

void ByteWriter::str(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  bytes_.insert(bytes_.end(), s.begin(), s.end());
}

void ByteWriter::raw(std::span<const std::uint8_t> bytes) { bytes_.insert(bytes_.end(), bytes.begin(), bytes.end()); }

void ByteReader::need(std::size_t n) const {
  if (n > remaining()) {
    throw TruncatedError("unexpected end of data: need " + std::to_string(n) + " bytes at offset " +
                         std::to_string(pos_) + ", " + std::to_string(remaining()) + " left");
  }
}

std::uint8_t ByteReader::u8() {
  need(1);
  return bytes_[pos_++];
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

std::vector<double> ByteReader::f64s(std::size_t count) {
  if (count > remaining() / 8) {
    throw TruncatedError("unexpected end of data: " + std::to_string(count) + " values declared at offset " +
                         std::to_string(pos_) + ", " + std::to_string(remaining()) + " bytes left");
  }
  std::vector<double> out(count);
  for (auto& x : out) x = f64();
  return out;
}

std::string ByteReader::str() {
  const std::uint32_t n = u32();
  need(n);
  std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
  pos_ += n;
  return s;
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t off = 0;
  while (off < bytes.size()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size() - off, 1u << 30);
    crc = crc32(crc, bytes.data() + off, static_cast<uInt>(chunk));
    off += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> seal(std::string_view magic, std::uint32_t version, std::span<const std::uint8_t> payload) {
  if (magic.size() != 8) throw ContractError("seal: magic must be 8 bytes");
  ByteWriter w;
  w.raw({reinterpret_cast<const std::uint8_t*>(magic.data()), magic.size()});
  w.u32(version);
  w.u64(payload.size());
  w.raw(payload);
  w.u32(crc32_of(w.bytes()));
  return w.take();
}

std::vector<std::uint8_t> unseal(std::span<const std::uint8_t> file, std::string_view magic,
                                 std::uint32_t version, const std::string& what) {
  constexpr std::size_t kHeader = 8 + 4 + 8;
  if (file.size() < 8 || std::memcmp(file.data(), magic.data(), 8) != 0) {
    if (file.size() < 8 && std::memcmp(file.data(), magic.data(), file.size()) == 0) {
      throw TruncatedError(what + ": file ends inside the header");
    }
    throw FormatError(what + ": bad magic string");
  }
  ByteReader r(file.subspan(8));
  const std::uint32_t found = r.u32();
  if (found != version) {
    throw VersionError(what + ": format version " + std::to_string(found) + " is not supported (expected " +
                       std::to_string(version) + ")");
  }
  const std::uint64_t length = r.u64();
  if (length > file.size() || file.size() - kHeader < 4 || file.size() - kHeader - 4 < length) {
    throw TruncatedError(what + ": file is shorter than its declared payload");
  }
  if (file.size() != kHeader + length + 4) throw FormatError(what + ": trailing bytes after the checksum");
  const std::uint32_t stored = ByteReader(file.subspan(kHeader + length)).u32();
  if (crc32_of(file.first(kHeader + length)) != stored) throw ChecksumError(what + ": checksum mismatch");
  const auto body = file.subspan(kHeader, length);
  return {body.begin(), body.end()};
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error while writing '" + path + "'");
}

}  // namespace augerino
