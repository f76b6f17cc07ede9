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

#include "lic/image.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <string>

#include "lic/errors.h"
#include "lic/network.h"

namespace lic {
namespace {

constexpr uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

Image DecodePng(std::span<const uint8_t> bytes, const std::string& name) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw IoError("cannot decode PNG " + name + ": " + img.message);
  }
  img.format = PNG_FORMAT_RGB;
  Image out(img.width, img.height);
  if (!png_image_finish_read(&img, nullptr, out.rgb.data(), 0, nullptr)) {
    png_image_free(&img);
    throw IoError("cannot decode PNG " + name + ": " + img.message);
  }
  return out;
}

void WritePng(const std::filesystem::path& path, const Image& image) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = image.width;
  img.height = image.height;
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.rgb.data(), 0,
                               nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + img.message);
  }
}

int64_t Reflect(int64_t i, int64_t n) {
  if (n == 1) return 0;
  const int64_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

}  // namespace

Image DecodePpm(std::span<const uint8_t> bytes) {
  size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](const char* what) {
    skip_space();
    uint64_t v = 0;
    size_t digits = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > 0xFFFFFFFFull) {
        throw InvalidInputError(std::string("PPM ") + what +
                                " exceeds 2^32-1");
      }
      ++digits;
    }
    if (digits == 0) throw IoError(std::string("PPM: missing ") + what);
    return static_cast<uint32_t>(v);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw IoError("not a binary PPM (P6) file");
  }
  pos = 2;
  const uint32_t w = read_uint("width");
  const uint32_t h = read_uint("height");
  const uint32_t maxval = read_uint("maxval");
  if (maxval != 255) throw IoError("only 8-bit PPM (maxval 255) is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw IoError("PPM: malformed header");
  }
  ++pos;
  const uint64_t need = uint64_t{w} * h * 3;
  if (bytes.size() - pos < need) throw IoError("PPM: truncated pixel data");
  Image out(w, h);
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), need,
              out.rgb.begin());
  return out;
}

std::vector<uint8_t> EncodePpm(const Image& image) {
  const std::string head = "P6\n" + std::to_string(image.width) + " " +
                           std::to_string(image.height) + "\n255\n";
  std::vector<uint8_t> out(head.begin(), head.end());
  out.insert(out.end(), image.rgb.begin(), image.rgb.end());
  return out;
}

Image ReadImage(const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = ReadFileBytes(path);
  if (bytes.size() >= 8 &&
      std::equal(std::begin(kPngSignature), std::end(kPngSignature),
                 bytes.begin())) {
    return DecodePng(bytes, path.string());
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return DecodePpm(bytes);
  }
  throw IoError("unrecognized image format: " + path.string());
}

void WriteImage(const std::filesystem::path& path, const Image& image) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") {
    WritePng(path, image);
  } else {
    WriteFileBytes(path, EncodePpm(image));
  }
}

Tensor ImageToTensor(const Image& image) {
  const int64_t h = image.height, w = image.width;
  Tensor t(Shape{1, 3, h, w});
  for (int64_t y = 0; y < h; ++y) {
    for (int64_t x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        t.at(0, c, y, x) =
            static_cast<float>(image.at(static_cast<uint32_t>(x),
                                        static_cast<uint32_t>(y), c)) /
            255.0f;
      }
    }
  }
  return t;
}

Image TensorToImage(const Tensor& x) {
  if (x.order() != 4 || x.dim(0) != 1 || x.dim(1) != 3) {
    throw InvalidInputError("expected a [1, 3, H, W] image tensor, got " +
                            ShapeToString(x.shape()));
  }
  Image out(static_cast<uint32_t>(x.dim(3)), static_cast<uint32_t>(x.dim(2)));
  for (int64_t y = 0; y < x.dim(2); ++y) {
    for (int64_t xx = 0; xx < x.dim(3); ++xx) {
      for (int c = 0; c < 3; ++c) {
        const float v = std::clamp(x.at(0, c, y, xx), 0.0f, 1.0f);
        out.at(static_cast<uint32_t>(xx), static_cast<uint32_t>(y), c) =
            static_cast<uint8_t>(std::lround(v * 255.0f));
      }
    }
  }
  return out;
}

Tensor ReflectPad(const Tensor& x, int multiple) {
  if (x.order() != 4) {
    throw InvalidInputError("reflect pad expects NCHW, got " +
                            ShapeToString(x.shape()));
  }
  if (multiple < 1) throw InvalidInputError("pad multiple must be positive");
  const int64_t h = x.dim(2), w = x.dim(3);
  if (h < 1 || w < 1) throw InvalidInputError("cannot pad an empty image");
  const int64_t ph = (h + multiple - 1) / multiple * multiple;
  const int64_t pw = (w + multiple - 1) / multiple * multiple;
  if (ph == h && pw == w) return x;
  Tensor out(Shape{x.dim(0), x.dim(1), ph, pw});
  for (int64_t n = 0; n < x.dim(0); ++n) {
    for (int64_t c = 0; c < x.dim(1); ++c) {
      for (int64_t y = 0; y < ph; ++y) {
        for (int64_t xx = 0; xx < pw; ++xx) {
          out.at(n, c, y, xx) = x.at(n, c, Reflect(y, h), Reflect(xx, w));
        }
      }
    }
  }
  return out;
}

}  // namespace lic
