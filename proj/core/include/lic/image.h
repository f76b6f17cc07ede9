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

// 8-bit RGB images, PNG/PPM file I/O and conversion to [0, 1] tensors.

#ifndef LIC_IMAGE_H_
#define LIC_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lic/tensor.h"

namespace lic {

struct Image {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> rgb;  // interleaved, row-major

  Image() = default;
  Image(uint32_t w, uint32_t h) : width(w), height(h), rgb(size_t{w} * h * 3) {}

  uint8_t& at(uint32_t x, uint32_t y, int c) {
    return rgb[(size_t{y} * width + x) * 3 + static_cast<size_t>(c)];
  }
  uint8_t at(uint32_t x, uint32_t y, int c) const {
    return rgb[(size_t{y} * width + x) * 3 + static_cast<size_t>(c)];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

// Reads PNG (any bit depth/colour type, converted to 8-bit RGB) or binary
// PPM (P6, maxval 255), detected from the file signature.
Image ReadImage(const std::filesystem::path& path);
// Format from the extension: .png, otherwise binary PPM.
void WriteImage(const std::filesystem::path& path, const Image& image);

Image DecodePpm(std::span<const uint8_t> bytes);
std::vector<uint8_t> EncodePpm(const Image& image);

// [1, 3, H, W], values / 255.
Tensor ImageToTensor(const Image& image);
// Clamps to [0, 1] and rounds to the nearest 8-bit level.
Image TensorToImage(const Tensor& x);

// Extends the bottom and right edges by mirror reflection (edge sample not
// repeated) to the next multiple of `multiple`. The original content stays
// at the top-left.
Tensor ReflectPad(const Tensor& x, int multiple);

}  // namespace lic

#endif  // LIC_IMAGE_H_
