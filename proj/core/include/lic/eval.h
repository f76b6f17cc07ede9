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

// Rate-distortion evaluation of trained models under the adaptation
// strategies, and the CSV that carries the results.

#ifndef LIC_EVAL_H_
#define LIC_EVAL_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lic/image.h"
#include "lic/network.h"
#include "lic/refine.h"

namespace lic {

enum class Strategy { kBaseline, kAdapt, kProba, kRetrained };

std::string_view StrategyLabel(Strategy s);
std::optional<Strategy> ParseStrategy(std::string_view label);

// MSE in 8-bit units between two images of equal size.
double Mse255(const Image& a, const Image& b);
double PsnrDb(double mse255);

struct RDPoint {
  std::string image_id;
  double lambda = 0;
  std::string strategy;
  double bpp_payload = 0;  // payload bits / original pixels
  double bpp_total = 0;    // including the container header
  double mse = 0;          // 8-bit units
  double psnr_db = 0;
  int refine_steps = 0;
  uint64_t seed = 0;
  bool aggregate = false;
  std::string error;  // non-empty for a failed row; metrics are NaN

  // bpp_payload + lambda * mse, the objective in the units training uses.
  double RdLoss() const { return bpp_payload + lambda * mse; }
};

struct EvalImage {
  std::string id;
  Image image;
};

// One model to evaluate: the model used for `strategy` at `lambda`.
// kAdapt refines latents with the given model; the others encode directly.
struct EvalModel {
  Strategy strategy = Strategy::kBaseline;
  double lambda = 0.01;
  const ModelParams* model = nullptr;
};

struct EvalConfig {
  int refine_steps = 1500;
  double refine_lr = 1e-3;
  int eval_every = 25;
  uint64_t seed = 0;
  int threads = 0;  // 0 picks the hardware count
};

// Compresses and decompresses one image; never throws, errors land in
// RDPoint::error.
RDPoint EvaluateOne(const EvalImage& image, size_t image_index,
                    const EvalModel& model, const EvalConfig& cfg);

// Detail rows in image order (models in the given order within an image),
// then one aggregate row per (lambda, strategy) in first-seen order.
std::vector<RDPoint> Evaluate(const std::vector<EvalImage>& images,
                              const std::vector<EvalModel>& models,
                              const EvalConfig& cfg);

// Means over the successful detail rows of each (lambda, strategy).
std::vector<RDPoint> AggregateRows(const std::vector<RDPoint>& details);

void WriteRdCsv(std::ostream& out, const std::vector<RDPoint>& rows);

}  // namespace lic

#endif  // LIC_EVAL_H_
