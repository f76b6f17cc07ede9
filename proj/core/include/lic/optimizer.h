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

#ifndef LIC_OPTIMIZER_H_
#define LIC_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "lic/tensor.h"

namespace lic {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moments are kept per target tensor, so
// updating disjoint subsets of tensors with separate states is equivalent to
// one joint update.
class AdamState {
 public:
  AdamState(AdamConfig config, std::span<const Shape> shapes);

  const AdamConfig& config() const { return config_; }
  int64_t step() const { return step_; }
  const std::vector<Tensor>& first_moment() const { return m_; }
  const std::vector<Tensor>& second_moment() const { return v_; }

  // Applies one update to `targets` in place. Throws DivergenceError before
  // touching anything if a gradient is non-finite, InvalidInputError on a
  // shape mismatch.
  void Step(std::span<const Tensor> grads, std::span<Tensor* const> targets);

 private:
  AdamConfig config_;
  int64_t step_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

}  // namespace lic

#endif  // LIC_OPTIMIZER_H_
