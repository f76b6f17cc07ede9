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

#include "lic/optimizer.h"

#include <cmath>
#include <string>

namespace lic {

AdamState::AdamState(AdamConfig config, std::span<const Shape> shapes)
    : config_(config) {
  if (!(config_.learning_rate > 0)) {
    throw ConfigError("Adam learning rate must be positive");
  }
  for (const Shape& s : shapes) {
    m_.emplace_back(s);
    v_.emplace_back(s);
  }
}

void AdamState::Step(std::span<const Tensor> grads,
                     std::span<Tensor* const> targets) {
  if (grads.size() != m_.size() || targets.size() != m_.size()) {
    throw InvalidInputError("adam: expected " + std::to_string(m_.size()) +
                            " tensors");
  }
  for (size_t i = 0; i < grads.size(); ++i) {
    RequireSameShape(grads[i].shape(), m_[i].shape(), "adam gradient");
    RequireSameShape(targets[i]->shape(), m_[i].shape(), "adam target");
    if (!grads[i].AllFinite()) {
      throw DivergenceError("adam: non-finite gradient in tensor " +
                            std::to_string(i));
    }
  }
  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (size_t i = 0; i < grads.size(); ++i) {
    auto g = grads[i].data();
    auto m = m_[i].data();
    auto v = v_[i].data();
    auto p = targets[i]->data();
    for (size_t j = 0; j < g.size(); ++j) {
      const double gj = g[j];
      const double mj = b1 * m[j] + (1.0 - b1) * gj;
      const double vj = b2 * v[j] + (1.0 - b2) * gj * gj;
      m[j] = static_cast<float>(mj);
      v[j] = static_cast<float>(vj);
      const double update = config_.learning_rate * (mj / c1) /
                            (std::sqrt(vj / c2) + config_.epsilon);
      p[j] = static_cast<float>(p[j] - update);
    }
  }
}

}  // namespace lic
