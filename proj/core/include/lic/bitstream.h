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

// Container for a coded image. Layout (little-endian, see
// docs/bitstream_format.md):
//
//   offset size field
//        0    4 magic "LPRS"
//        4    1 format version
//        5    8 model-id
//       13    1 lambda index (0xFF = not on the standard grid)
//       14    4 original width
//       18    4 original height
//       22    2 latent channels C
//       24    2 latent height h
//       26    2 latent width w
//       28    4 payload length in bytes
//       32      payload (range-coded symbols, channel-major, row-major)

#ifndef LIC_BITSTREAM_H_
#define LIC_BITSTREAM_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace lic {

inline constexpr std::array<char, 4> kBitstreamMagic = {'L', 'P', 'R', 'S'};
inline constexpr uint8_t kBitstreamVersion = 1;
inline constexpr size_t kBitstreamHeaderSize = 32;
inline constexpr uint8_t kCustomLambdaIndex = 0xFF;

// The standard rate-distortion operating points.
inline constexpr std::array<double, 4> kLambdaGrid = {0.003, 0.01, 0.03, 0.1};

// Index of `lambda` in kLambdaGrid, or kCustomLambdaIndex.
uint8_t LambdaIndex(double lambda);

struct BitstreamHeader {
  uint8_t version = kBitstreamVersion;
  uint64_t model_id = 0;
  uint8_t lambda_index = kCustomLambdaIndex;
  uint32_t width = 0;
  uint32_t height = 0;
  uint16_t latent_channels = 0;
  uint16_t latent_height = 0;
  uint16_t latent_width = 0;
  uint32_t payload_length = 0;

  friend bool operator==(const BitstreamHeader&,
                         const BitstreamHeader&) = default;
};

struct Bitstream {
  BitstreamHeader header;
  std::vector<uint8_t> payload;
};

// Sets header.payload_length from the payload.
std::vector<uint8_t> PackBitstream(BitstreamHeader header,
                                   std::span<const uint8_t> payload);

// Parses only the fixed header. Throws NotABitstreamError on bad magic,
// UnsupportedVersionError on an unknown version, DecodeError when shorter
// than the header.
BitstreamHeader ParseBitstreamHeader(std::span<const uint8_t> bytes);

// Also checks that the payload length field matches the bytes present.
Bitstream UnpackBitstream(std::span<const uint8_t> bytes);

}  // namespace lic

#endif  // LIC_BITSTREAM_H_
