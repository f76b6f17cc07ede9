// Copyright 2026 The LIC Authors. All Rights Reserved.
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

// Little-endian byte serialization helpers shared by the model and
// bitstream containers. Internal to the library.

#ifndef LIC_SRC_BYTE_IO_H_
#define LIC_SRC_BYTE_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace lic {
namespace internal {

class ByteWriter {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U16(uint16_t v) { Le(v, 2); }
  void U32(uint32_t v) { Le(v, 4); }
  void U64(uint64_t v) { Le(v, 8); }
  void I16(int16_t v) { U16(static_cast<uint16_t>(v)); }
  void F32(float v) { U32(std::bit_cast<uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Bytes(std::span<const uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
  }
  void Tag(const char (&tag)[5]) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(tag[i]));
  }

  std::vector<uint8_t>& bytes() { return out_; }

 private:
  void Le(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> out_;
};

// Reads fail by throwing E (a lic error type) with a message naming what
// was being read.
template <typename E>
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> in) : in_(in) {}

  uint8_t U8(const char* what) { return static_cast<uint8_t>(Le(1, what)); }
  uint16_t U16(const char* what) { return static_cast<uint16_t>(Le(2, what)); }
  uint32_t U32(const char* what) { return static_cast<uint32_t>(Le(4, what)); }
  uint64_t U64(const char* what) { return Le(8, what); }
  int16_t I16(const char* what) { return static_cast<int16_t>(U16(what)); }
  float F32(const char* what) { return std::bit_cast<float>(U32(what)); }
  double F64(const char* what) { return std::bit_cast<double>(U64(what)); }
  std::span<const uint8_t> Bytes(size_t n, const char* what) {
    Need(n, what);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  size_t position() const { return pos_; }
  size_t remaining() const { return in_.size() - pos_; }

 private:
  void Need(size_t n, const char* what) {
    if (in_.size() - pos_ < n) {
      throw E(std::string("truncated input while reading ") + what);
    }
  }
  uint64_t Le(int n, const char* what) {
    Need(static_cast<size_t>(n), what);
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<uint64_t>(in_[pos_ + static_cast<size_t>(i)]) << (8 * i);
    }
    pos_ += static_cast<size_t>(n);
    return v;
  }

  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

}  // namespace internal
}  // namespace lic

#endif  // LIC_SRC_BYTE_IO_H_
