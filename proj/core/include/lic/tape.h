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

// Reverse-mode automatic differentiation over the small op set the codec
// needs. A Tape records every op eagerly (values are computed on insertion)
// and backward() walks the records in reverse.
//
// A Tape is confined to one thread; run one tape per image or batch shard.

#ifndef LIC_TAPE_H_
#define LIC_TAPE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lic/tensor.h"

namespace lic {

// Handle of a value recorded on a tape (its tape-id).
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Zero-padding margins, applied identically to rows and columns. `end` may
// differ from `begin` so that transposed convolutions can produce exact
// multiples of the stride.
struct PadSpec {
  int begin = 0;
  int end = 0;

  static PadSpec Symmetric(int p) { return PadSpec{p, p}; }
};

int64_t Conv2dOutputExtent(int64_t in, int64_t kernel, int stride,
                           PadSpec pad);
int64_t Conv2dTransposeOutputExtent(int64_t in, int64_t kernel, int stride,
                                    PadSpec pad);

template <typename T>
class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(std::vector<std::optional<BasicTensor<T>>> by_id)
      : by_id_(std::move(by_id)) {}

  // Gradient of the root w.r.t. `v`. Only leaves created with
  // requires_grad=true are retained.
  const BasicTensor<T>& operator[](Var v) const;
  bool Has(Var v) const;

 private:
  std::vector<std::optional<BasicTensor<T>>> by_id_;
};

template <typename T>
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Leaf(BasicTensor<T> value, bool requires_grad = false);

  // kernel: [out_channels, in_channels, k, k].
  Var Conv2d(Var input, Var kernel, int stride, PadSpec pad);
  // kernel: [in_channels, out_channels, k, k]; the adjoint of Conv2d with
  // the same kernel tensor.
  Var Conv2dTranspose(Var input, Var kernel, int stride, PadSpec pad);
  // bias: [C], added to every spatial position of channel C.
  Var AddChannelBias(Var input, Var bias);
  Var LeakyRelu(Var input, T slope);
  Var Add(Var a, Var b);
  Var Sub(Var a, Var b);
  Var Scale(Var a, T factor);
  Var Sum(Var a);
  Var Mse(Var a, Var b);
  // Spatial window [top, top+height) x [left, left+width) of an NCHW tensor.
  Var Crop(Var input, int64_t top, int64_t left, int64_t height,
           int64_t width);

  // Per-element probability mass of the unit-width bin centred at each
  // value under a per-channel logistic density. loc and log_scale: [C].
  Var RelaxedLikelihood(Var y, Var loc, Var log_scale);
  // -sum(log2(max(p, floor))). Elements at or below the floor contribute
  // no gradient; their count is available through FlooredCount().
  Var NegLog2Sum(Var p, T floor);
  int64_t FlooredCount(Var v) const;

  const BasicTensor<T>& value(Var v) const;
  bool requires_grad(Var v) const;
  const std::string& op_name(Var v) const;

  // Number of recorded nodes; a proxy for the op sequence executed.
  size_t size() const { return nodes_.size(); }

  // Throws InvalidInputError for a non-scalar root and DivergenceError
  // naming the first node whose incoming gradient is non-finite.
  Gradients<T> Backward(Var root);

 private:
  struct Node {
    std::string op;
    BasicTensor<T> value;
    bool requires_grad = false;
    bool is_leaf = false;
    int64_t aux = 0;
    // Accumulates into grads_ of the inputs given this node's gradient.
    std::function<void(const BasicTensor<T>&)> backward;
  };

  Var Push(Node node);
  const Node& node(Var v) const;
  void Accumulate(Var v, const BasicTensor<T>& g);
  bool NeedsGrad(Var v) const { return nodes_[v.id].requires_grad; }

  std::vector<Node> nodes_;
  std::vector<std::optional<BasicTensor<T>>> grads_;
};

extern template class Tape<float>;
extern template class Tape<double>;
extern template class Gradients<float>;
extern template class Gradients<double>;

}  // namespace lic

#endif  // LIC_TAPE_H_
