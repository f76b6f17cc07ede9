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

#include "lic/eval.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <thread>
#include <utility>

#include "lic/codec.h"

namespace lic {

std::string_view StrategyLabel(Strategy s) {
  switch (s) {
    case Strategy::kBaseline:
      return "baseline";
    case Strategy::kAdapt:
      return "+adapt";
    case Strategy::kProba:
      return "+proba";
    case Strategy::kRetrained:
      return "retrained";
  }
  return "unknown";
}

std::optional<Strategy> ParseStrategy(std::string_view label) {
  for (Strategy s : {Strategy::kBaseline, Strategy::kAdapt, Strategy::kProba,
                     Strategy::kRetrained}) {
    if (StrategyLabel(s) == label) return s;
  }
  return std::nullopt;
}

double Mse255(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height) {
    throw InvalidInputError("image sizes differ");
  }
  if (a.rgb.empty()) throw InvalidInputError("empty image");
  double sum = 0;
  for (size_t i = 0; i < a.rgb.size(); ++i) {
    const double d = static_cast<double>(a.rgb[i]) - b.rgb[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.rgb.size());
}

double PsnrDb(double mse255) {
  if (mse255 <= 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse255);
}

RDPoint EvaluateOne(const EvalImage& image, size_t image_index,
                    const EvalModel& model, const EvalConfig& cfg) {
  RDPoint p;
  p.image_id = image.id;
  p.lambda = model.lambda;
  p.strategy = std::string(StrategyLabel(model.strategy));
  p.seed = cfg.seed;
  p.refine_steps = model.strategy == Strategy::kAdapt ? cfg.refine_steps : 0;
  try {
    if (model.model == nullptr) throw InvalidInputError("no model supplied");
    const Tensor x = ImageToTensor(image.image);
    EncodedImage enc;
    if (model.strategy == Strategy::kAdapt) {
      RefineConfig rc;
      rc.max_steps = cfg.refine_steps;
      rc.learning_rate = cfg.refine_lr;
      rc.lambda = model.lambda;
      rc.eval_every = cfg.eval_every;
      rc.seed = cfg.seed;
      rc.image_id = image_index;
      enc = EncodeWithRefinement(x, *model.model, rc).encoded;
    } else {
      enc = EncodeImage(x, *model.model);
    }
    const DecodedImage dec = DecodeImage(enc.bytes, *model.model);
    const double pixels =
        static_cast<double>(image.image.width) * image.image.height;
    p.bpp_payload = 8.0 * enc.header.payload_length / pixels;
    p.bpp_total = 8.0 * static_cast<double>(enc.bytes.size()) / pixels;
    p.mse = Mse255(image.image, TensorToImage(dec.image));
    p.psnr_db = PsnrDb(p.mse);
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    p.bpp_payload = p.bpp_total = p.mse = p.psnr_db = nan;
    p.error = e.what();
  }
  return p;
}

std::vector<RDPoint> AggregateRows(const std::vector<RDPoint>& details) {
  std::vector<std::pair<double, std::string>> keys;
  for (const RDPoint& d : details) {
    if (d.aggregate) continue;
    std::pair<double, std::string> k{d.lambda, d.strategy};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      keys.push_back(std::move(k));
    }
  }
  std::vector<RDPoint> out;
  for (const auto& [lambda, strategy] : keys) {
    RDPoint a;
    a.image_id = "mean";
    a.lambda = lambda;
    a.strategy = strategy;
    a.aggregate = true;
    int n = 0;
    for (const RDPoint& d : details) {
      if (d.aggregate || d.lambda != lambda || d.strategy != strategy) continue;
      a.refine_steps = d.refine_steps;
      a.seed = d.seed;
      if (!d.error.empty()) continue;
      a.bpp_payload += d.bpp_payload;
      a.bpp_total += d.bpp_total;
      a.mse += d.mse;
      a.psnr_db += d.psnr_db;
      ++n;
    }
    if (n == 0) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      a.bpp_payload = a.bpp_total = a.mse = a.psnr_db = nan;
      a.error = "no successful rows";
    } else {
      a.bpp_payload /= n;
      a.bpp_total /= n;
      a.mse /= n;
      a.psnr_db /= n;
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<RDPoint> Evaluate(const std::vector<EvalImage>& images,
                              const std::vector<EvalModel>& models,
                              const EvalConfig& cfg) {
  const size_t jobs = images.size() * models.size();
  std::vector<RDPoint> rows(jobs);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t j = next++; j < jobs; j = next++) {
      const size_t i = j / models.size();
      rows[j] = EvaluateOne(images[i], i, models[j % models.size()], cfg);
    }
  };
  const size_t threads = std::clamp<size_t>(
      cfg.threads > 0 ? static_cast<size_t>(cfg.threads)
                      : std::thread::hardware_concurrency(),
      1, std::max<size_t>(jobs, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  std::vector<RDPoint> agg = AggregateRows(rows);
  rows.insert(rows.end(), agg.begin(), agg.end());
  return rows;
}

void WriteRdCsv(std::ostream& out, const std::vector<RDPoint>& rows) {
  out << "image_id,lambda,strategy,bpp_payload,bpp_total,mse,psnr_db,"
         "refine_steps,seed\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(10);
  for (const RDPoint& r : rows) {
    out << r.image_id << ',' << r.lambda << ',' << r.strategy << ','
        << r.bpp_payload << ',' << r.bpp_total << ',' << r.mse << ','
        << r.psnr_db << ',' << r.refine_steps << ',' << r.seed << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace lic
