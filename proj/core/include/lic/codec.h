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

// Image <-> bitstream pipeline around a trained model: padding, latent
// quantization, entropy coding and the container.

#ifndef LIC_CODEC_H_
#define LIC_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "lic/bitstream.h"
#include "lic/network.h"
#include "lic/tensor.h"

namespace lic {

// Rounds to the nearest integer (ties to even) and saturates to the 16-bit
// range the escape code can carry.
Tensor RoundLatents(const Tensor& y);

struct EncodedImage {
  std::vector<uint8_t> bytes;  // header + payload
  BitstreamHeader header;
  Tensor latents;  // the quantized latents that were coded
};

// Codes already-quantized latents [1, C, h, w] for an image of the given
// original size.
EncodedImage EncodeLatents(const Tensor& quantized, const ModelParams& params,
                           uint32_t width, uint32_t height);

// psi(x) without refinement. x: [1, 3, H, W] in [0, 1], any H, W.
EncodedImage EncodeImage(const Tensor& x, const ModelParams& params);

struct DecodedImage {
  Tensor image;    // [1, 3, height, width], clamped to [0, 1]
  Tensor latents;  // decoded quantized latents
  BitstreamHeader header;
  size_t decoder_ops = 0;
};

// Throws ModelMismatchError when the stream was made by another model.
DecodedImage DecodeImage(std::span<const uint8_t> bytes,
                         const ModelParams& params);

// Symbol scan order: channel-major, then row-major within a channel.
std::vector<int32_t> LatentChannelLabels(int64_t channels, int64_t height,
                                         int64_t width);

}  // namespace lic

#endif  // LIC_CODEC_H_
