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

// Rate-distortion objective
//
//   L = rate_bits / pixels + lambda * distortion_scale * mse(x, x_tilde)
//
// with rate measured on latents relaxed by additive uniform noise. With the
// default distortion_scale of 255^2, L is bits per pixel plus lambda times
// the MSE in 8-bit units.

#ifndef LIC_RD_LOSS_H_
#define LIC_RD_LOSS_H_

#include <cstdint>

#include "lic/entropy_model.h"
#include "lic/network.h"
#include "lic/tape.h"

namespace lic {

inline constexpr double kDefaultDistortionScale = 255.0 * 255.0;

struct RDLossConfig {
  double lambda = 0.01;
  double distortion_scale = kDefaultDistortionScale;
  // kRelaxed adds the supplied noise; kDiscrete rounds the latents and
  // passes gradients straight through the rounding.
  RateMode rate_mode = RateMode::kRelaxed;

  void Validate() const;
};

// The single place the two terms are combined, in T arithmetic, so that
// the loss can be recomposed bit-exactly from its reported diagnostics.
template <typename T>
T ComposeRdLoss(T rate_bits, T mse, int64_t pixels, const RDLossConfig& cfg) {
  return rate_bits * static_cast<T>(1.0 / static_cast<double>(pixels)) +
         mse * static_cast<T>(cfg.lambda * cfg.distortion_scale);
}

// Uniform noise in [-1/2, 1/2), a pure function of (seed, image, step).
template <typename T>
BasicTensor<T> UniformNoise(const Shape& shape, uint64_t seed,
                            uint64_t image_id, uint64_t step);

struct RDTerms {
  Var loss;
  Var rate_bits;
  Var mse;
  Var reconstruction;  // unclamped, cropped to the distortion window
  int64_t pixels = 0;
  int64_t floored = 0;
};

// Decoder half of the objective for latents `y` already on the tape.
// Distortion is measured against `target` (N x 3 x height x width) on the
// top-left height x width window of the decoded image.
template <typename T>
RDTerms LatentRdGraph(Tape<T>& tape, const ArchitectureConfig& arch,
                      const NetworkVars& vars, Var y,
                      const BasicTensor<T>& noise, Var target,
                      const RDLossConfig& cfg);

// Full objective for an image batch x (padded to a multiple of D).
template <typename T>
RDTerms RdLossGraph(Tape<T>& tape, const ArchitectureConfig& arch,
                    const NetworkVars& vars, Var x,
                    const BasicTensor<T>& noise, const RDLossConfig& cfg);

struct RDLossValue {
  double loss = 0;
  double rate_bits = 0;
  double rate_bpp = 0;
  double mse = 0;
  int64_t floored = 0;
};

// Forward-only evaluation; `noise` must have the latent shape.
template <typename T>
RDLossValue RdLoss(const BasicTensor<T>& x, const ModelParams& params,
                   const RDLossConfig& cfg, const BasicTensor<T>& noise);

}  // namespace lic

#endif  // LIC_RD_LOSS_H_
