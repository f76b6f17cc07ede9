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

#include "lic/rd_loss.h"

#include <cmath>
#include <string>

#include "lic/rng.h"

namespace lic {

void RDLossConfig::Validate() const {
  if (!(lambda >= 0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be finite and non-negative");
  }
  if (!(distortion_scale > 0)) {
    throw ConfigError("distortion scale must be positive");
  }
}

template <typename T>
BasicTensor<T> UniformNoise(const Shape& shape, uint64_t seed,
                            uint64_t image_id, uint64_t step) {
  CounterRng rng(seed, image_id, step);
  BasicTensor<T> out(shape);
  auto d = out.data();
  for (size_t i = 0; i < d.size(); ++i) {
    d[i] = static_cast<T>(rng.Uniform(i) - 0.5);
  }
  return out;
}

template Tensor UniformNoise(const Shape&, uint64_t, uint64_t, uint64_t);
template Tensor64 UniformNoise(const Shape&, uint64_t, uint64_t, uint64_t);

namespace {

template <typename T>
void RequireFinite(const Tape<T>& tape, Var v, const char* stage) {
  if (!tape.value(v).AllFinite()) {
    throw DivergenceError(std::string("rd_loss: non-finite values in ") +
                          stage);
  }
}

}  // namespace

template <typename T>
RDTerms LatentRdGraph(Tape<T>& tape, const ArchitectureConfig& arch,
                      const NetworkVars& vars, Var y,
                      const BasicTensor<T>& noise, Var target,
                      const RDLossConfig& cfg) {
  cfg.Validate();
  const BasicTensor<T>& yv = tape.value(y);
  Var y_tilde;
  if (cfg.rate_mode == RateMode::kRelaxed) {
    RequireSameShape(noise.shape(), yv.shape(), "rd_loss noise");
    y_tilde = tape.Add(y, tape.Leaf(noise));
  } else {
    BasicTensor<T> offset(yv.shape());
    for (size_t i = 0; i < offset.size(); ++i) {
      offset[i] = std::nearbyint(yv[i]) - yv[i];
    }
    y_tilde = tape.Add(y, tape.Leaf(std::move(offset)));
  }
  const T floor = static_cast<T>(std::ldexp(1.0, -kDefaultCdfPrecision));
  RDTerms terms;
  terms.rate_bits = tape.NegLog2Sum(
      tape.RelaxedLikelihood(y_tilde, vars.prior_loc, vars.prior_log_scale),
      floor);
  terms.floored = tape.FlooredCount(terms.rate_bits);
  RequireFinite(tape, terms.rate_bits, "rate");

  Var x_tilde = DecodeGraph(tape, arch, vars.decoder, y_tilde);
  RequireFinite(tape, x_tilde, "decoder");
  const Shape ts = tape.value(target).shape();
  const Shape xs = tape.value(x_tilde).shape();
  if (ts.size() != 4 || ts[0] != xs[0] || ts[1] != xs[1] || ts[2] > xs[2] ||
      ts[3] > xs[3]) {
    throw InvalidInputError("rd_loss: target " + ShapeToString(ts) +
                            " does not fit reconstruction " +
                            ShapeToString(xs));
  }
  if (ts[2] != xs[2] || ts[3] != xs[3]) {
    x_tilde = tape.Crop(x_tilde, 0, 0, ts[2], ts[3]);
  }
  terms.reconstruction = x_tilde;
  terms.mse = tape.Mse(target, x_tilde);
  RequireFinite(tape, terms.mse, "distortion");
  terms.pixels = ts[0] * ts[2] * ts[3];
  terms.loss = tape.Add(
      tape.Scale(terms.rate_bits,
                 static_cast<T>(1.0 / static_cast<double>(terms.pixels))),
      tape.Scale(terms.mse,
                 static_cast<T>(cfg.lambda * cfg.distortion_scale)));
  return terms;
}

template <typename T>
RDTerms RdLossGraph(Tape<T>& tape, const ArchitectureConfig& arch,
                    const NetworkVars& vars, Var x,
                    const BasicTensor<T>& noise, const RDLossConfig& cfg) {
  const Var y = EncodeGraph(tape, arch, vars.encoder, x);
  RequireFinite(tape, y, "encoder");
  return LatentRdGraph(tape, arch, vars, y, noise, x, cfg);
}

template <typename T>
RDLossValue RdLoss(const BasicTensor<T>& x, const ModelParams& params,
                   const RDLossConfig& cfg, const BasicTensor<T>& noise) {
  Tape<T> tape;
  const NetworkVars vars = RegisterParams(tape, params, GroupMask{});
  const Var xv = tape.Leaf(x);
  const RDTerms t = RdLossGraph(tape, params.arch, vars, xv, noise, cfg);
  RDLossValue out;
  out.loss = tape.value(t.loss).item();
  out.rate_bits = tape.value(t.rate_bits).item();
  out.rate_bpp = out.rate_bits / static_cast<double>(t.pixels);
  out.mse = tape.value(t.mse).item();
  out.floored = t.floored;
  return out;
}

template RDTerms LatentRdGraph(Tape<float>&, const ArchitectureConfig&,
                               const NetworkVars&, Var, const Tensor&, Var,
                               const RDLossConfig&);
template RDTerms LatentRdGraph(Tape<double>&, const ArchitectureConfig&,
                               const NetworkVars&, Var, const Tensor64&, Var,
                               const RDLossConfig&);
template RDTerms RdLossGraph(Tape<float>&, const ArchitectureConfig&,
                             const NetworkVars&, Var, const Tensor&,
                             const RDLossConfig&);
template RDTerms RdLossGraph(Tape<double>&, const ArchitectureConfig&,
                             const NetworkVars&, Var, const Tensor64&,
                             const RDLossConfig&);
template RDLossValue RdLoss(const Tensor&, const ModelParams&,
                            const RDLossConfig&, const Tensor&);
template RDLossValue RdLoss(const Tensor64&, const ModelParams&,
                            const RDLossConfig&, const Tensor64&);

}  // namespace lic
