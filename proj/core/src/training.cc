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

#include "lic/training.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <string>
#include <thread>

#include "lic/optimizer.h"
#include "lic/rng.h"

namespace lic {

std::string_view TrainModeName(TrainMode mode) {
  switch (mode) {
    case TrainMode::kFull:
      return "full";
    case TrainMode::kProbaOnly:
      return "proba-only";
    case TrainMode::kFrozen:
      return "frozen";
  }
  return "unknown";
}

std::optional<TrainMode> ParseTrainMode(std::string_view name) {
  if (name == "full") return TrainMode::kFull;
  if (name == "proba-only") return TrainMode::kProbaOnly;
  if (name == "frozen") return TrainMode::kFrozen;
  return std::nullopt;
}

GroupMask TrainableGroups(TrainMode mode) {
  switch (mode) {
    case TrainMode::kFull:
      return {true, true, true};
    case TrainMode::kProbaOnly:
      return {false, false, true};
    case TrainMode::kFrozen:
      return {};
  }
  return {};
}

void TrainSchedule::Validate() const {
  if (steps < 0) throw ConfigError("training steps must be >= 0");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (crop_size < 1) throw ConfigError("crop size must be >= 1");
  if (!(learning_rate > 0)) throw ConfigError("learning rate must be > 0");
  if (log_every < 1) throw ConfigError("log interval must be >= 1");
  if (max_nonfinite_steps < 1) {
    throw ConfigError("divergence patience must be >= 1");
  }
  if (threads < 0) throw ConfigError("thread count must be >= 0");
}

namespace {

std::vector<Tensor*> TargetTensors(ModelParams& p, GroupMask mask) {
  std::vector<Tensor*> out;
  if (mask.encoder) {
    for (Tensor& t : p.encoder) out.push_back(&t);
  }
  if (mask.decoder) {
    for (Tensor& t : p.decoder) out.push_back(&t);
  }
  if (mask.prior) {
    out.push_back(&p.prior.loc);
    out.push_back(&p.prior.log_scale);
  }
  return out;
}

std::vector<Var> TargetVars(const NetworkVars& v, GroupMask mask) {
  std::vector<Var> out;
  if (mask.encoder) out.insert(out.end(), v.encoder.begin(), v.encoder.end());
  if (mask.decoder) out.insert(out.end(), v.decoder.begin(), v.decoder.end());
  if (mask.prior) {
    out.push_back(v.prior_loc);
    out.push_back(v.prior_log_scale);
  }
  return out;
}

Tensor CropImage(const Tensor& img, int64_t top, int64_t left, int64_t size) {
  Tensor out(Shape{1, 3, size, size});
  for (int c = 0; c < 3; ++c) {
    for (int64_t y = 0; y < size; ++y) {
      for (int64_t x = 0; x < size; ++x) {
        out.at(0, c, y, x) = img.at(0, c, top + y, left + x);
      }
    }
  }
  return out;
}

struct ShardResult {
  bool finite = false;
  double loss = 0;
  double rate_bpp = 0;
  double mse = 0;
  std::vector<Tensor> grads;
};

ShardResult RunShard(const Tensor& crop, const ModelParams& params,
                     GroupMask mask, const RDLossConfig& cfg,
                     const Tensor& noise) {
  ShardResult r;
  try {
    Tape<float> tape;
    const NetworkVars vars = RegisterParams(tape, params, mask);
    const Var x = tape.Leaf(crop);
    const RDTerms terms = RdLossGraph(tape, params.arch, vars, x, noise, cfg);
    r.loss = tape.value(terms.loss).item();
    r.rate_bpp = tape.value(terms.rate_bits).item() /
                 static_cast<double>(terms.pixels);
    r.mse = tape.value(terms.mse).item();
    if (!std::isfinite(r.loss)) return r;
    const Gradients<float> g = tape.Backward(terms.loss);
    for (Var v : TargetVars(vars, mask)) r.grads.push_back(g[v]);
    r.finite = true;
  } catch (const DivergenceError&) {
    r.finite = false;
  }
  return r;
}

}  // namespace

TrainResult Train(std::span<const Tensor> corpus, const ModelParams& init,
                  TrainMode mode, const RDLossConfig& cfg,
                  const TrainSchedule& schedule,
                  const TrainCallbacks& callbacks) {
  schedule.Validate();
  cfg.Validate();
  TrainResult result;
  result.params = init;
  if (mode == TrainMode::kFrozen) return result;

  if (corpus.empty()) throw InvalidInputError("training corpus is empty");
  const int64_t crop = schedule.crop_size;
  if (crop % init.arch.downsampling() != 0) {
    throw ConfigError("crop size must be a multiple of " +
                      std::to_string(init.arch.downsampling()));
  }
  for (const Tensor& img : corpus) {
    if (img.order() != 4 || img.dim(0) != 1 || img.dim(1) != 3 ||
        img.dim(2) < crop || img.dim(3) < crop) {
      throw InvalidInputError("corpus image " + ShapeToString(img.shape()) +
                              " smaller than the " + std::to_string(crop) +
                              " crop");
    }
  }

  ModelParams& params = result.params;
  params.lambda = cfg.lambda;
  const GroupMask mask = TrainableGroups(mode);
  std::vector<Tensor*> targets = TargetTensors(params, mask);
  std::vector<Shape> shapes;
  for (const Tensor* t : targets) shapes.push_back(t->shape());
  AdamState adam(AdamConfig{.learning_rate = schedule.learning_rate}, shapes);

  const int batch = schedule.batch_size;
  const int threads =
      std::clamp(schedule.threads > 0
                     ? schedule.threads
                     : static_cast<int>(std::thread::hardware_concurrency()),
                 1, batch);
  const int64_t latent = crop / init.arch.downsampling();
  const Shape noise_shape{1, init.arch.latent_channels(), latent, latent};
  CounterRng sampler(schedule.seed, /*stream=*/0x5a4d);

  double ema = 0;
  double best_ema = std::numeric_limits<double>::infinity();
  ModelParams best = params;
  int bad_streak = 0;
  TrainLogRow window;
  int window_steps = 0;

  for (int step = 1; step <= schedule.steps; ++step) {
    std::vector<Tensor> crops;
    std::vector<Tensor> noises;
    for (int b = 0; b < batch; ++b) {
      const Tensor& img = corpus[sampler.NextBelow(corpus.size())];
      const int64_t top = static_cast<int64_t>(
          sampler.NextBelow(static_cast<uint64_t>(img.dim(2) - crop + 1)));
      const int64_t left = static_cast<int64_t>(
          sampler.NextBelow(static_cast<uint64_t>(img.dim(3) - crop + 1)));
      crops.push_back(CropImage(img, top, left, crop));
      const uint64_t sample_id =
          static_cast<uint64_t>(step - 1) * static_cast<uint64_t>(batch) +
          static_cast<uint64_t>(b);
      noises.push_back(UniformNoise<float>(noise_shape, schedule.seed,
                                           sample_id,
                                           static_cast<uint64_t>(step)));
    }

    std::vector<ShardResult> shards(static_cast<size_t>(batch));
    auto work = [&](int t) {
      for (int b = t; b < batch; b += threads) {
        shards[static_cast<size_t>(b)] =
            RunShard(crops[static_cast<size_t>(b)], params, mask, cfg,
                     noises[static_cast<size_t>(b)]);
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (std::thread& th : pool) th.join();
    }

    bool finite = true;
    for (const ShardResult& s : shards) finite = finite && s.finite;
    double loss = 0, rate = 0, mse = 0;
    std::vector<Tensor> grads;
    if (finite) {
      // Fixed shard order keeps the reduction deterministic.
      grads = shards[0].grads;
      for (size_t b = 1; b < shards.size(); ++b) {
        for (size_t i = 0; i < grads.size(); ++i) {
          auto d = grads[i].data();
          auto s = shards[b].grads[i].data();
          for (size_t j = 0; j < d.size(); ++j) d[j] += s[j];
        }
      }
      const float inv = 1.0f / static_cast<float>(batch);
      for (Tensor& g : grads) {
        for (float& v : g.data()) v *= inv;
      }
      for (const ShardResult& s : shards) {
        loss += s.loss / batch;
        rate += s.rate_bpp / batch;
        mse += s.mse / batch;
      }
    }
    if (finite) {
      try {
        adam.Step(grads, targets);
      } catch (const DivergenceError&) {
        finite = false;
      }
    }
    if (!finite || !params.AllFinite()) {
      if (++bad_streak >= schedule.max_nonfinite_steps) {
        result.params = best;
        result.aborted = true;
        break;
      }
      continue;
    }
    bad_streak = 0;
    result.steps_completed = step;
    if (callbacks.on_step) callbacks.on_step(step, params);

    ema = (step == 1) ? loss : 0.95 * ema + 0.05 * loss;
    if (ema < best_ema) {
      best_ema = ema;
      best = params;
    }
    window.loss += loss;
    window.rate_bpp += rate;
    window.mse += mse;
    ++window_steps;
    if (step % schedule.log_every == 0 || step == schedule.steps) {
      TrainLogRow row{step, window.loss / window_steps,
                      window.rate_bpp / window_steps, window.mse / window_steps};
      result.log.push_back(row);
      if (callbacks.on_log) callbacks.on_log(row);
      window = TrainLogRow{};
      window_steps = 0;
    }
  }
  return result;
}

void AppendTrainLogCsv(const std::filesystem::path& path,
                       std::span<const TrainLogRow> rows, TrainMode mode,
                       double lambda, uint64_t seed) {
  const bool fresh =
      !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open training log " + path.string());
  if (fresh) out << "step,loss,rate_bpp,mse,mode,lambda,seed\n";
  out << std::setprecision(8);
  for (const TrainLogRow& r : rows) {
    out << r.step << ',' << r.loss << ',' << r.rate_bpp << ',' << r.mse << ','
        << TrainModeName(mode) << ',' << lambda << ',' << seed << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace lic
