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

#include "lic/bitstream.h"

#include <algorithm>
#include <string>

#include "byte_io.h"
#include "lic/errors.h"

namespace lic {

using internal::ByteReader;
using internal::ByteWriter;

uint8_t LambdaIndex(double lambda) {
  for (size_t i = 0; i < kLambdaGrid.size(); ++i) {
    if (kLambdaGrid[i] == lambda) return static_cast<uint8_t>(i);
  }
  return kCustomLambdaIndex;
}

std::vector<uint8_t> PackBitstream(BitstreamHeader header,
                                   std::span<const uint8_t> payload) {
  if (payload.size() > 0xFFFFFFFFu) {
    throw InvalidInputError("payload exceeds 4 GiB");
  }
  header.payload_length = static_cast<uint32_t>(payload.size());
  ByteWriter w;
  w.Tag("LPRS");
  w.U8(header.version);
  w.U64(header.model_id);
  w.U8(header.lambda_index);
  w.U32(header.width);
  w.U32(header.height);
  w.U16(header.latent_channels);
  w.U16(header.latent_height);
  w.U16(header.latent_width);
  w.U32(header.payload_length);
  w.Bytes(payload);
  return std::move(w.bytes());
}

BitstreamHeader ParseBitstreamHeader(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4 ||
      !std::equal(kBitstreamMagic.begin(), kBitstreamMagic.end(),
                  bytes.begin(), [](char a, uint8_t b) {
                    return static_cast<uint8_t>(a) == b;
                  })) {
    throw NotABitstreamError("missing LPRS magic");
  }
  ByteReader<DecodeError> r(bytes.subspan(4));
  BitstreamHeader h;
  h.version = r.U8("version");
  if (h.version != kBitstreamVersion) {
    throw UnsupportedVersionError("unsupported bitstream version " +
                                  std::to_string(h.version));
  }
  h.model_id = r.U64("model-id");
  h.lambda_index = r.U8("lambda index");
  h.width = r.U32("width");
  h.height = r.U32("height");
  h.latent_channels = r.U16("latent channels");
  h.latent_height = r.U16("latent height");
  h.latent_width = r.U16("latent width");
  h.payload_length = r.U32("payload length");
  return h;
}

Bitstream UnpackBitstream(std::span<const uint8_t> bytes) {
  Bitstream b;
  b.header = ParseBitstreamHeader(bytes);
  const size_t have = bytes.size() - kBitstreamHeaderSize;
  if (have != b.header.payload_length) {
    throw DecodeError("payload length field says " +
                      std::to_string(b.header.payload_length) +
                      " bytes, stream carries " + std::to_string(have));
  }
  auto payload = bytes.subspan(kBitstreamHeaderSize);
  b.payload.assign(payload.begin(), payload.end());
  return b;
}

}  // namespace lic
