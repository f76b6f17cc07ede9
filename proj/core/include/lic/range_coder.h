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

// Byte-oriented range coder with 32-bit range and carry propagation through
// a cached output byte. Interval arithmetic is integer-only, so the payload
// is a pure function of the symbols and tables on every platform.
//
// Subintervals are computed as (range * cum) >> precision rather than by
// pre-dividing the range, which keeps coding overhead at a few bits per
// stream instead of a fraction of a bit per symbol.

#ifndef LIC_RANGE_CODER_H_
#define LIC_RANGE_CODER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "lic/entropy_model.h"

namespace lic {

class RangeEncoder {
 public:
  // Codes the interval [cum_low, cum_high) out of 2^precision.
  // precision <= 16, cum_low < cum_high <= 2^precision.
  void Encode(uint32_t cum_low, uint32_t cum_high, int precision);
  // Uniform bypass coding of the low `nbits` (<= 16) bits of `value`.
  void EncodeBits(uint32_t value, int nbits);
  // Flushes and returns the stream. The encoder is left empty.
  std::vector<uint8_t> Finish();

 private:
  void ShiftLow();

  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint8_t cache_ = 0;
  uint64_t cache_size_ = 1;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
 public:
  // Throws DecodeError if the stream is shorter than the coder preamble.
  explicit RangeDecoder(std::span<const uint8_t> bytes);

  // Returns the index i with cdf[i] <= target < cdf[i+1].
  int DecodeSymbol(std::span<const uint32_t> cdf, int precision);
  uint32_t DecodeBits(int nbits);

  // Throws DecodeError unless exactly every input byte was consumed.
  void Finish() const;

 private:
  void Consume(uint32_t lo, uint32_t hi);
  uint8_t NextByte();

  std::span<const uint8_t> in_;
  size_t pos_ = 0;
  uint32_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
};

// Codes `values` where values[i] uses tables.cdf[channels[i]]. Values
// outside the table support are sent as the escape symbol followed by 16
// raw bits (two's complement); values outside [-32768, 32767] throw
// UnencodableSymbolError.
std::vector<uint8_t> EncodeSymbols(std::span<const int32_t> values,
                                   std::span<const int32_t> channels,
                                   const CdfTables& tables);

// Inverse of EncodeSymbols; decodes channels.size() symbols. Decoding with
// tables other than those used for encoding is not detected here; the
// container's model-id check guards against it.
std::vector<int32_t> DecodeSymbols(std::span<const uint8_t> bytes,
                                   std::span<const int32_t> channels,
                                   const CdfTables& tables);

// Exact code length of `values` under the quantized tables, in bits.
double TableRateBits(std::span<const int32_t> values,
                     std::span<const int32_t> channels,
                     const CdfTables& tables);

}  // namespace lic

#endif  // LIC_RANGE_CODER_H_
