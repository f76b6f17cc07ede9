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

#include "lic/range_coder.h"

#include <cmath>
#include <string>

namespace lic {
namespace {

constexpr uint32_t kTop = 1u << 24;
constexpr int kPreambleBytes = 5;

void CheckPrecision(int precision) {
  if (precision < 1 || precision > 16) {
    throw ConfigError("range coder precision must lie in [1, 16]");
  }
}

uint32_t Scaled(uint32_t range, uint32_t cum, int precision) {
  return static_cast<uint32_t>((static_cast<uint64_t>(range) * cum) >>
                               precision);
}

int SymbolIndex(int32_t v, const CdfTables& t) {
  if (v < t.support_min || v > t.support_max) return t.escape_index();
  return v - t.support_min;
}

const std::vector<uint32_t>& TableFor(const CdfTables& tables, int32_t c) {
  if (c < 0 || static_cast<size_t>(c) >= tables.cdf.size()) {
    throw InvalidInputError("symbol channel " + std::to_string(c) +
                            " has no CDF table");
  }
  return tables.cdf[static_cast<size_t>(c)];
}

}  // namespace

void RangeEncoder::Encode(uint32_t cum_low, uint32_t cum_high, int precision) {
  CheckPrecision(precision);
  if (!(cum_low < cum_high) || cum_high > (1u << precision)) {
    throw InvalidInputError("range coder: empty or out-of-range interval");
  }
  const uint32_t a = Scaled(range_, cum_low, precision);
  const uint32_t b = Scaled(range_, cum_high, precision);
  low_ += a;
  range_ = b - a;
  while (range_ < kTop) {
    range_ <<= 8;
    ShiftLow();
  }
}

void RangeEncoder::EncodeBits(uint32_t value, int nbits) {
  const uint32_t v = value & ((1u << nbits) - 1);
  Encode(v, v + 1, nbits);
}

void RangeEncoder::ShiftLow() {
  if (static_cast<uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const uint8_t carry = static_cast<uint8_t>(low_ >> 32);
    uint8_t temp = cache_;
    do {
      out_.push_back(static_cast<uint8_t>(temp + carry));
      temp = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

std::vector<uint8_t> RangeEncoder::Finish() {
  for (int i = 0; i < kPreambleBytes; ++i) ShiftLow();
  std::vector<uint8_t> out = std::move(out_);
  *this = RangeEncoder();
  return out;
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> bytes) : in_(bytes) {
  if (in_.size() < kPreambleBytes) {
    throw DecodeError("range coder stream shorter than its preamble");
  }
  if (in_[0] != 0) throw DecodeError("range coder stream has a bad lead byte");
  for (int i = 0; i < kPreambleBytes; ++i) {
    code_ = (code_ << 8) | NextByte();
  }
}

uint8_t RangeDecoder::NextByte() {
  if (pos_ >= in_.size()) throw DecodeError("truncated range coder payload");
  return in_[pos_++];
}

void RangeDecoder::Consume(uint32_t lo, uint32_t hi) {
  code_ -= lo;
  range_ = hi - lo;
  while (range_ < kTop) {
    code_ = (code_ << 8) | NextByte();
    range_ <<= 8;
  }
}

int RangeDecoder::DecodeSymbol(std::span<const uint32_t> cdf, int precision) {
  CheckPrecision(precision);
  // Largest i with Scaled(cdf[i]) <= code; cdf[0] == 0 always qualifies.
  size_t lo = 0;
  size_t hi = cdf.size() - 1;
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    if (Scaled(range_, cdf[mid], precision) <= code_) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const uint32_t a = Scaled(range_, cdf[lo], precision);
  const uint32_t b = Scaled(range_, cdf[lo + 1], precision);
  if (code_ >= b) throw DecodeError("range coder state out of bounds");
  Consume(a, b);
  return static_cast<int>(lo);
}

uint32_t RangeDecoder::DecodeBits(int nbits) {
  CheckPrecision(nbits);
  const uint32_t total = 1u << nbits;
  uint32_t v = static_cast<uint32_t>(
      (static_cast<uint64_t>(code_) << nbits) / range_);
  if (v >= total) v = total - 1;
  while (v + 1 < total && Scaled(range_, v + 1, nbits) <= code_) ++v;
  while (v > 0 && Scaled(range_, v, nbits) > code_) --v;
  const uint32_t a = Scaled(range_, v, nbits);
  const uint32_t b = Scaled(range_, v + 1, nbits);
  if (code_ >= b) throw DecodeError("range coder state out of bounds");
  Consume(a, b);
  return v;
}

void RangeDecoder::Finish() const {
  if (pos_ != in_.size()) {
    throw DecodeError("range coder payload has " +
                      std::to_string(in_.size() - pos_) + " trailing bytes");
  }
}

std::vector<uint8_t> EncodeSymbols(std::span<const int32_t> values,
                                   std::span<const int32_t> channels,
                                   const CdfTables& tables) {
  if (values.size() != channels.size()) {
    throw InvalidInputError("encode_symbols: " + std::to_string(values.size()) +
                            " values but " + std::to_string(channels.size()) +
                            " channel labels");
  }
  RangeEncoder enc;
  const int escape = tables.escape_index();
  for (size_t i = 0; i < values.size(); ++i) {
    const int32_t v = values[i];
    if (v < -32768 || v > 32767) {
      throw UnencodableSymbolError("symbol " + std::to_string(v) +
                                   " outside the 16-bit escape range");
    }
    const std::vector<uint32_t>& cdf = TableFor(tables, channels[i]);
    const int s = SymbolIndex(v, tables);
    enc.Encode(cdf[static_cast<size_t>(s)], cdf[static_cast<size_t>(s) + 1],
               tables.precision);
    if (s == escape) {
      const uint32_t raw = static_cast<uint16_t>(static_cast<int16_t>(v));
      enc.EncodeBits(raw >> 8, 8);
      enc.EncodeBits(raw & 0xFF, 8);
    }
  }
  return enc.Finish();
}

std::vector<int32_t> DecodeSymbols(std::span<const uint8_t> bytes,
                                   std::span<const int32_t> channels,
                                   const CdfTables& tables) {
  RangeDecoder dec(bytes);
  std::vector<int32_t> out;
  out.reserve(channels.size());
  const int escape = tables.escape_index();
  for (int32_t c : channels) {
    const std::vector<uint32_t>& cdf = TableFor(tables, c);
    const int s = dec.DecodeSymbol(cdf, tables.precision);
    if (s == escape) {
      const uint32_t hi = dec.DecodeBits(8);
      const uint32_t lo = dec.DecodeBits(8);
      out.push_back(static_cast<int16_t>(static_cast<uint16_t>((hi << 8) | lo)));
    } else {
      out.push_back(tables.support_min + s);
    }
  }
  dec.Finish();
  return out;
}

double TableRateBits(std::span<const int32_t> values,
                     std::span<const int32_t> channels,
                     const CdfTables& tables) {
  const double total = std::ldexp(1.0, tables.precision);
  double bits = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    const std::vector<uint32_t>& cdf = TableFor(tables, channels[i]);
    const int s = SymbolIndex(values[i], tables);
    const double width = cdf[static_cast<size_t>(s) + 1] - cdf[static_cast<size_t>(s)];
    bits -= std::log2(width / total);
    if (s == tables.escape_index()) bits += 16;
  }
  return bits;
}

}  // namespace lic
