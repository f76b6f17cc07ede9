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

// Encode-time latent refinement: gradient descent on the latents of one
// image under the rate-distortion objective, with the decoder and the prior
// held fixed. Each step draws uniform noise around the current latents,
// decodes, and takes an Adam step on the latents only. Every
// `eval_every` steps the true objective (rounded latents, discrete rate,
// clamped reconstruction) is measured, and the best such checkpoint is
// returned rather than the final iterate.

#ifndef LIC_REFINE_H_
#define LIC_REFINE_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "lic/codec.h"
#include "lic/network.h"
#include "lic/tensor.h"

namespace lic {

struct RefineConfig {
  int max_steps = 1500;
  double learning_rate = 1e-3;
  // Overrides the lambda the model was trained for.
  std::optional<double> lambda;
  int eval_every = 25;
  uint64_t seed = 0;
  uint64_t image_id = 0;
  double distortion_scale = 255.0 * 255.0;

  void Validate() const;
};

struct RefineCheckpoint {
  int step = 0;
  double relaxed_loss = 0;
  double true_loss = 0;
  double true_rate_bits = 0;
  double true_mse = 0;
};

struct RefineResult {
  Tensor latents;  // unrounded latents of the best checkpoint
  std::vector<RefineCheckpoint> trace;
  size_t best_index = 0;
  bool diverged = false;

  const RefineCheckpoint& best() const { return trace.at(best_index); }
};

// y0: [1, C, h, w] starting latents. image: [1, 3, H, W] original image in
// [0, 1] with H <= h*D and W <= w*D; distortion is measured on that window.
RefineResult RefineLatents(const Tensor& y0, const Tensor& image,
                           const ModelParams& params, const RefineConfig& cfg);

struct RefinedEncoding {
  EncodedImage encoded;
  RefineResult refinement;
};

// psi(x), refine, round, code. With max_steps == 0 the output equals
// EncodeImage(x, params).
RefinedEncoding EncodeWithRefinement(const Tensor& image,
                                     const ModelParams& params,
                                     const RefineConfig& cfg);

// CSV: step,relaxed_loss,true_loss,true_rate_bits,true_mse
void WriteRefineTrace(std::ostream& out, const RefineResult& result,
                      uint64_t seed);

}  // namespace lic

#endif  // LIC_REFINE_H_
