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

// im2col/col2im lowering of strided 2-D correlation onto dense GEMM. All
// buffers are row-major. Internal to the library.

#ifndef LIC_SRC_CONV_KERNELS_H_
#define LIC_SRC_CONV_KERNELS_H_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace lic {
namespace internal {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMapMat = Eigen::Map<const RowMat<T>>;

// Geometry of one correlation: an image of `channels` x `height` x `width`
// sampled by a k x k window at stride `stride`, shifted by `pad` (the begin
// margin), at `out_h` x `out_w` window positions. Reads outside the image
// are zero.
struct ConvGeometry {
  int64_t channels;
  int64_t height;
  int64_t width;
  int64_t kernel;
  int64_t stride;
  int64_t pad;
  int64_t out_h;
  int64_t out_w;

  int64_t rows() const { return channels * kernel * kernel; }
  int64_t cols() const { return out_h * out_w; }
};

// cols[(c*k + ky)*k + kx][oy*out_w + ox] = src[c][oy*s + ky - pad][ox*s + kx - pad]
template <typename T>
void Im2Col(const T* src, const ConvGeometry& g, T* cols) {
  const int64_t k = g.kernel;
  for (int64_t c = 0; c < g.channels; ++c) {
    const T* plane = src + c * g.height * g.width;
    for (int64_t ky = 0; ky < k; ++ky) {
      for (int64_t kx = 0; kx < k; ++kx) {
        T* row = cols + ((c * k + ky) * k + kx) * g.cols();
        for (int64_t oy = 0; oy < g.out_h; ++oy) {
          const int64_t iy = oy * g.stride + ky - g.pad;
          T* dst = row + oy * g.out_w;
          if (iy < 0 || iy >= g.height) {
            for (int64_t ox = 0; ox < g.out_w; ++ox) dst[ox] = T(0);
            continue;
          }
          const T* line = plane + iy * g.width;
          for (int64_t ox = 0; ox < g.out_w; ++ox) {
            const int64_t ix = ox * g.stride + kx - g.pad;
            dst[ox] = (ix >= 0 && ix < g.width) ? line[ix] : T(0);
          }
        }
      }
    }
  }
}

// Adjoint of Im2Col: scatter-adds cols back into dst (which is not cleared).
template <typename T>
void Col2Im(const T* cols, const ConvGeometry& g, T* dst) {
  const int64_t k = g.kernel;
  for (int64_t c = 0; c < g.channels; ++c) {
    T* plane = dst + c * g.height * g.width;
    for (int64_t ky = 0; ky < k; ++ky) {
      for (int64_t kx = 0; kx < k; ++kx) {
        const T* row = cols + ((c * k + ky) * k + kx) * g.cols();
        for (int64_t oy = 0; oy < g.out_h; ++oy) {
          const int64_t iy = oy * g.stride + ky - g.pad;
          if (iy < 0 || iy >= g.height) continue;
          T* line = plane + iy * g.width;
          const T* src = row + oy * g.out_w;
          for (int64_t ox = 0; ox < g.out_w; ++ox) {
            const int64_t ix = ox * g.stride + kx - g.pad;
            if (ix >= 0 && ix < g.width) line[ix] += src[ox];
          }
        }
      }
    }
  }
}

}  // namespace internal
}  // namespace lic

#endif  // LIC_SRC_CONV_KERNELS_H_
