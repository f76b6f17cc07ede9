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

#include "lic/codec.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lic/entropy_model.h"
#include "lic/image.h"
#include "lic/range_coder.h"

namespace lic {

Tensor RoundLatents(const Tensor& y) {
  Tensor out = y;
  for (float& v : out.data()) {
    v = std::clamp(std::nearbyint(v), -32768.0f, 32767.0f);
  }
  return out;
}

std::vector<int32_t> LatentChannelLabels(int64_t channels, int64_t height,
                                         int64_t width) {
  std::vector<int32_t> labels;
  labels.reserve(static_cast<size_t>(channels * height * width));
  for (int64_t c = 0; c < channels; ++c) {
    labels.insert(labels.end(), static_cast<size_t>(height * width),
                  static_cast<int32_t>(c));
  }
  return labels;
}

EncodedImage EncodeLatents(const Tensor& quantized, const ModelParams& params,
                           uint32_t width, uint32_t height) {
  if (quantized.order() != 4 || quantized.dim(0) != 1 ||
      quantized.dim(1) != params.arch.latent_channels()) {
    throw InvalidInputError("expected latents [1, " +
                            std::to_string(params.arch.latent_channels()) +
                            ", h, w], got " +
                            ShapeToString(quantized.shape()));
  }
  const int64_t c = quantized.dim(1), h = quantized.dim(2), w = quantized.dim(3);
  if (h > 0xFFFF || w > 0xFFFF) {
    throw InvalidInputError("latent extents exceed the 16-bit header fields");
  }
  std::vector<int32_t> values;
  values.reserve(quantized.size());
  for (float v : quantized.data()) {
    if (v != std::nearbyint(v)) {
      throw InvalidInputError("EncodeLatents needs integer-valued latents");
    }
    values.push_back(static_cast<int32_t>(v));
  }
  const CdfTables tables = BuildCdfTables(params.prior);
  const std::vector<uint8_t> payload =
      EncodeSymbols(values, LatentChannelLabels(c, h, w), tables);

  EncodedImage out;
  out.header.model_id = params.ModelId();
  out.header.lambda_index = LambdaIndex(params.lambda);
  out.header.width = width;
  out.header.height = height;
  out.header.latent_channels = static_cast<uint16_t>(c);
  out.header.latent_height = static_cast<uint16_t>(h);
  out.header.latent_width = static_cast<uint16_t>(w);
  out.header.payload_length = static_cast<uint32_t>(payload.size());
  out.bytes = PackBitstream(out.header, payload);
  out.latents = quantized;
  return out;
}

EncodedImage EncodeImage(const Tensor& x, const ModelParams& params) {
  if (x.order() != 4 || x.dim(0) != 1 || x.dim(1) != 3) {
    throw InvalidInputError("expected an image [1, 3, H, W], got " +
                            ShapeToString(x.shape()));
  }
  if (x.dim(2) > 0xFFFFFFFFll || x.dim(3) > 0xFFFFFFFFll) {
    throw InvalidInputError("image dimensions exceed 2^32-1");
  }
  const Tensor padded = ReflectPad(x, params.arch.downsampling());
  const Tensor y = EncodeForward(params, padded);
  return EncodeLatents(RoundLatents(y), params,
                       static_cast<uint32_t>(x.dim(3)),
                       static_cast<uint32_t>(x.dim(2)));
}

DecodedImage DecodeImage(std::span<const uint8_t> bytes,
                         const ModelParams& params) {
  const Bitstream bs = UnpackBitstream(bytes);
  const BitstreamHeader& h = bs.header;
  if (h.model_id != params.ModelId()) {
    throw ModelMismatchError("bitstream was produced by another model");
  }
  if (h.latent_channels != params.arch.latent_channels()) {
    throw DecodeError("latent channel count does not match the model");
  }
  const int64_t d = params.arch.downsampling();
  if (int64_t{h.latent_height} * d < h.height ||
      int64_t{h.latent_width} * d < h.width || h.width == 0 || h.height == 0) {
    throw DecodeError("header image size inconsistent with latent extents");
  }
  const CdfTables tables = BuildCdfTables(params.prior);
  const std::vector<int32_t> values = DecodeSymbols(
      bs.payload,
      LatentChannelLabels(h.latent_channels, h.latent_height, h.latent_width),
      tables);
  DecodedImage out;
  out.header = h;
  std::vector<float> lat(values.begin(), values.end());
  out.latents = Tensor(Shape{1, h.latent_channels, h.latent_height,
                             h.latent_width},
                       std::move(lat));
  const Tensor full = DecodeForward(params, out.latents,
                                    DecoderOutput::kClamped, &out.decoder_ops);
  Tensor cropped(Shape{1, 3, h.height, h.width});
  for (int c = 0; c < 3; ++c) {
    for (int64_t y = 0; y < h.height; ++y) {
      for (int64_t x = 0; x < h.width; ++x) {
        cropped.at(0, c, y, x) = full.at(0, c, y, x);
      }
    }
  }
  out.image = std::move(cropped);
  return out;
}

}  // namespace lic
