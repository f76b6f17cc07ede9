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

#ifndef LIC_TENSOR_H_
#define LIC_TENSOR_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lic/errors.h"

namespace lic {

// Extents in batch x channel x height x width order. Order is at most 4; a
// scalar is the empty shape.
using Shape = std::vector<int64_t>;

std::string ShapeToString(const Shape& shape);
int64_t ShapeElementCount(const Shape& shape);

// Dense, contiguous, value-semantic array. Float is the working precision;
// double is used to run identical graphs for gradient checks.
template <typename T>
class BasicTensor {
 public:
  using value_type = T;

  BasicTensor() = default;

  explicit BasicTensor(Shape shape, T fill = T(0))
      : shape_(std::move(shape)) {
    CheckOrder();
    data_.assign(static_cast<size_t>(ShapeElementCount(shape_)), fill);
  }

  BasicTensor(Shape shape, std::vector<T> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    CheckOrder();
    if (static_cast<int64_t>(data_.size()) != ShapeElementCount(shape_)) {
      throw InvalidInputError("tensor data length " +
                              std::to_string(data_.size()) +
                              " does not match shape " +
                              ShapeToString(shape_));
    }
  }

  static BasicTensor Scalar(T v) { return BasicTensor(Shape{}, {v}); }

  const Shape& shape() const { return shape_; }
  int order() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int i) const { return shape_.at(static_cast<size_t>(i)); }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  const std::vector<T>& vec() const { return data_; }

  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }

  // NCHW element access; only valid for order-4 tensors.
  T& at(int64_t n, int64_t c, int64_t h, int64_t w) {
    return data_[Offset(n, c, h, w)];
  }
  const T& at(int64_t n, int64_t c, int64_t h, int64_t w) const {
    return data_[Offset(n, c, h, w)];
  }

  T item() const {
    if (data_.size() != 1) {
      throw InvalidInputError("item() on tensor of shape " +
                              ShapeToString(shape_));
    }
    return data_[0];
  }

  bool AllFinite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](T v) { return std::isfinite(v); });
  }

  template <typename U>
  BasicTensor<U> Cast() const {
    std::vector<U> out(data_.begin(), data_.end());
    return BasicTensor<U>(shape_, std::move(out));
  }

  BasicTensor Reshaped(Shape shape) const {
    return BasicTensor(std::move(shape), data_);
  }

  void Fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  friend bool operator==(const BasicTensor& a, const BasicTensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  void CheckOrder() const {
    if (shape_.size() > 4) {
      throw InvalidInputError("tensor order > 4: " + ShapeToString(shape_));
    }
    for (int64_t e : shape_) {
      if (e < 0) throw InvalidInputError("negative extent in " +
                                         ShapeToString(shape_));
    }
  }

  size_t Offset(int64_t n, int64_t c, int64_t h, int64_t w) const {
    return static_cast<size_t>(((n * shape_[1] + c) * shape_[2] + h) *
                                   shape_[3] +
                               w);
  }

  Shape shape_;
  std::vector<T> data_;
};

using Tensor = BasicTensor<float>;
using Tensor64 = BasicTensor<double>;

// Throws InvalidInputError naming both shapes when they differ.
void RequireSameShape(const Shape& a, const Shape& b, const char* what);

}  // namespace lic

#endif  // LIC_TENSOR_H_
