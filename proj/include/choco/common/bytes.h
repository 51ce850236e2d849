/*
 * Copyright 2026 The CHOCO Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CHOCO_COMMON_BYTES_H_
#define CHOCO_COMMON_BYTES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "choco/common/error.h"

namespace choco {

// Little-endian append-only encoder.
class ByteWriter {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U16(uint16_t v) { Le(v, 2); }
  void U32(uint32_t v) { Le(v, 4); }
  void U64(uint64_t v) { Le(v, 8); }
  void Bytes(std::span<const uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void Bytes(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
  // Length-prefixed (u32) string.
  void Str(std::string_view s) {
    U32(static_cast<uint32_t>(s.size()));
    Bytes(s);
  }
  void Words(std::span<const uint64_t> words) {
    const std::size_t at = out_.size();
    out_.resize(at + 8 * words.size());
    uint8_t* p = out_.data() + at;
    for (uint64_t w : words) {
      for (int i = 0; i < 8; ++i) *p++ = static_cast<uint8_t>(w >> (8 * i));
    }
  }

  std::size_t size() const { return out_.size(); }
  std::vector<uint8_t>& buffer() { return out_; }
  std::vector<uint8_t> Take() { return std::move(out_); }

 private:
  void Le(uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> out_;
};

// Bounds-checked decoder; every overrun throws FormatError("short read").
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> in) : in_(in) {}

  uint8_t U8() { return static_cast<uint8_t>(Le(1)); }
  uint16_t U16() { return static_cast<uint16_t>(Le(2)); }
  uint32_t U32() { return static_cast<uint32_t>(Le(4)); }
  uint64_t U64() { return Le(8); }
  std::span<const uint8_t> Bytes(std::size_t count) {
    Need(count);
    auto out = in_.subspan(pos_, count);
    pos_ += count;
    return out;
  }
  std::string String(std::size_t count) {
    auto b = Bytes(count);
    return std::string(b.begin(), b.end());
  }
  std::string Str() { return String(U32()); }
  void Words(std::span<uint64_t> out) {
    auto b = Bytes(8 * out.size());
    const uint8_t* p = b.data();
    for (auto& w : out) {
      w = 0;
      for (int i = 0; i < 8; ++i) w |= uint64_t{*p++} << (8 * i);
    }
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }
  void ExpectEnd() const {
    if (pos_ != in_.size()) throw FormatError("trailing bytes");
  }

 private:
  void Need(std::size_t count) const {
    if (count > in_.size() - pos_) throw FormatError("short read");
  }
  uint64_t Le(int bytes) {
    Need(bytes);
    uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= uint64_t{in_[pos_ + i]} << (8 * i);
    pos_ += bytes;
    return v;
  }

  std::span<const uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace choco

#endif  // CHOCO_COMMON_BYTES_H_
