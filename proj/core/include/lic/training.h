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

// Training of the codec under the rate-distortion objective in three
// regimes: everything (kFull), only the prior (kProbaOnly), or nothing
// (kFrozen).

#ifndef LIC_TRAINING_H_
#define LIC_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lic/network.h"
#include "lic/rd_loss.h"

namespace lic {

enum class TrainMode { kFull, kProbaOnly, kFrozen };

std::string_view TrainModeName(TrainMode mode);
std::optional<TrainMode> ParseTrainMode(std::string_view name);
GroupMask TrainableGroups(TrainMode mode);

struct TrainSchedule {
  int steps = 20000;
  int batch_size = 8;
  int crop_size = 64;
  double learning_rate = 1e-3;
  uint64_t seed = 1;
  int log_every = 100;
  // Abort after this many consecutive steps with a non-finite loss or
  // gradient, returning the best checkpoint seen.
  int max_nonfinite_steps = 50;
  // Worker threads for the per-image shards; 0 picks the hardware count.
  // Results do not depend on this value.
  int threads = 0;

  void Validate() const;
};

struct TrainLogRow {
  int step = 0;
  double loss = 0;
  double rate_bpp = 0;
  double mse = 0;
};

struct TrainCallbacks {
  std::function<void(const TrainLogRow&)> on_log;
  // Called after every committed update with the new parameters.
  std::function<void(int step, const ModelParams&)> on_step;
};

struct TrainResult {
  ModelParams params;
  std::vector<TrainLogRow> log;
  int steps_completed = 0;
  bool aborted = false;
};

// corpus: images [1, 3, H, W] in [0, 1], each at least crop_size on both
// sides. Batches are random crops; image order, crop positions and noise
// are all derived from schedule.seed.
TrainResult Train(std::span<const Tensor> corpus, const ModelParams& init,
                  TrainMode mode, const RDLossConfig& cfg,
                  const TrainSchedule& schedule,
                  const TrainCallbacks& callbacks = {});

// Appends rows (step,loss,rate_bpp,mse,mode,lambda,seed), writing the
// header first if the file is new or empty.
void AppendTrainLogCsv(const std::filesystem::path& path,
                       std::span<const TrainLogRow> rows, TrainMode mode,
                       double lambda, uint64_t seed);

}  // namespace lic

#endif  // LIC_TRAINING_H_
