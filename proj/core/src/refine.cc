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

#include "lic/refine.h"

#include <cmath>
#include <iomanip>
#include <limits>

#include "lic/entropy_model.h"
#include "lic/image.h"
#include "lic/optimizer.h"
#include "lic/rd_loss.h"

namespace lic {

void RefineConfig::Validate() const {
  if (max_steps < 0) throw ConfigError("refinement steps must be >= 0");
  if (!(learning_rate > 0)) throw ConfigError("learning rate must be > 0");
  if (eval_every < 1) throw ConfigError("evaluation cadence must be >= 1");
  if (lambda && !(*lambda >= 0)) throw ConfigError("lambda must be >= 0");
}

namespace {

struct TrueObjective {
  double loss;
  double rate_bits;
  double mse;
};

TrueObjective EvaluateTrue(const Tensor& y, const Tensor& image,
                           const ModelParams& params,
                           const RDLossConfig& loss_cfg) {
  const Tensor y_hat = RoundLatents(y);
  const double bits =
      ComputeRateBits(y_hat, params.prior, RateMode::kDiscrete).bits;
  const Tensor recon = DecodeForward(params, y_hat, DecoderOutput::kClamped);
  const int64_t h = image.dim(2), w = image.dim(3);
  double acc = 0;
  for (int c = 0; c < 3; ++c) {
    for (int64_t yy = 0; yy < h; ++yy) {
      for (int64_t x = 0; x < w; ++x) {
        const double d = static_cast<double>(image.at(0, c, yy, x)) -
                         recon.at(0, c, yy, x);
        acc += d * d;
      }
    }
  }
  const double mse = acc / static_cast<double>(3 * h * w);
  return {ComposeRdLoss<double>(bits, mse, h * w, loss_cfg), bits, mse};
}

}  // namespace

RefineResult RefineLatents(const Tensor& y0, const Tensor& image,
                           const ModelParams& params, const RefineConfig& cfg) {
  cfg.Validate();
  const int64_t d = params.arch.downsampling();
  if (y0.order() != 4 || y0.dim(0) != 1 ||
      y0.dim(1) != params.arch.latent_channels()) {
    throw InvalidInputError("refine: latents " + ShapeToString(y0.shape()) +
                            " do not match the model");
  }
  if (image.order() != 4 || image.dim(0) != 1 || image.dim(1) != 3 ||
      image.dim(2) > y0.dim(2) * d || image.dim(3) > y0.dim(3) * d ||
      image.dim(2) <= (y0.dim(2) - 1) * d ||
      image.dim(3) <= (y0.dim(3) - 1) * d) {
    throw InvalidInputError("refine: image " + ShapeToString(image.shape()) +
                            " does not match latents " +
                            ShapeToString(y0.shape()));
  }
  RDLossConfig loss_cfg;
  loss_cfg.lambda = cfg.lambda.value_or(params.lambda);
  loss_cfg.distortion_scale = cfg.distortion_scale;
  loss_cfg.Validate();

  RefineResult result;
  Tensor y = y0;
  const std::vector<Shape> shapes = {y.shape()};
  AdamState adam(AdamConfig{.learning_rate = cfg.learning_rate}, shapes);
  double best_loss = std::numeric_limits<double>::infinity();

  // Relaxed loss at the current latents; fills `grad` when given.
  auto relaxed_pass = [&](int step, Tensor* grad) {
    Tape<float> tape;
    NetworkVars vars;
    for (const Tensor& t : params.decoder) vars.decoder.push_back(tape.Leaf(t));
    vars.prior_loc = tape.Leaf(params.prior.loc);
    vars.prior_log_scale = tape.Leaf(params.prior.log_scale);
    const Var yv = tape.Leaf(y, /*requires_grad=*/grad != nullptr);
    const Var target = tape.Leaf(image);
    const Tensor noise = UniformNoise<float>(y.shape(), cfg.seed, cfg.image_id,
                                             static_cast<uint64_t>(step));
    const RDTerms terms =
        LatentRdGraph(tape, params.arch, vars, yv, noise, target, loss_cfg);
    const double loss = tape.value(terms.loss).item();
    if (grad) *grad = tape.Backward(terms.loss)[yv];
    return loss;
  };

  auto checkpoint = [&](int step, double relaxed) {
    const TrueObjective t = EvaluateTrue(y, image, params, loss_cfg);
    result.trace.push_back({step, relaxed, t.loss, t.rate_bits, t.mse});
    if (result.trace.size() == 1 || t.loss < best_loss ||
        (std::isnan(best_loss) && !std::isnan(t.loss))) {
      best_loss = t.loss;
      result.best_index = result.trace.size() - 1;
      result.latents = y;
    }
  };

  Tensor grad;
  for (int step = 0; step <= cfg.max_steps; ++step) {
    const bool last = step == cfg.max_steps;
    double relaxed;
    try {
      relaxed = relaxed_pass(step, last ? nullptr : &grad);
      if (!std::isfinite(relaxed)) throw DivergenceError("non-finite loss");
    } catch (const DivergenceError&) {
      result.diverged = true;
      break;
    }
    if (last || step % cfg.eval_every == 0) checkpoint(step, relaxed);
    if (last) break;
    try {
      Tensor* targets[] = {&y};
      adam.Step(std::span<const Tensor>(&grad, 1), targets);
    } catch (const DivergenceError&) {
      result.diverged = true;
      break;
    }
    if (!y.AllFinite()) {
      result.diverged = true;
      break;
    }
  }
  if (result.trace.empty()) {
    // Diverged before the first checkpoint; fall back to the warm start.
    y = y0;
    checkpoint(0, std::numeric_limits<double>::quiet_NaN());
  }
  return result;
}

RefinedEncoding EncodeWithRefinement(const Tensor& image,
                                     const ModelParams& params,
                                     const RefineConfig& cfg) {
  if (image.order() != 4 || image.dim(0) != 1 || image.dim(1) != 3) {
    throw InvalidInputError("expected an image [1, 3, H, W], got " +
                            ShapeToString(image.shape()));
  }
  const Tensor padded = ReflectPad(image, params.arch.downsampling());
  const Tensor y0 = EncodeForward(params, padded);
  RefinedEncoding out;
  out.refinement = RefineLatents(y0, image, params, cfg);
  out.encoded = EncodeLatents(RoundLatents(out.refinement.latents), params,
                              static_cast<uint32_t>(image.dim(3)),
                              static_cast<uint32_t>(image.dim(2)));
  return out;
}

void WriteRefineTrace(std::ostream& out, const RefineResult& result,
                      uint64_t seed) {
  out << "step,relaxed_loss,true_loss,true_rate_bits,true_mse,seed\n";
  out << std::setprecision(10);
  for (const RefineCheckpoint& c : result.trace) {
    out << c.step << ',' << c.relaxed_loss << ',' << c.true_loss << ','
        << c.true_rate_bits << ',' << c.true_mse << ',' << seed << '\n';
  }
}

}  // namespace lic
