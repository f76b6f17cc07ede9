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

// lic: train, compress, decompress, evaluate and generate corpora.
//
// Exit status: 0 on success, 1 on a runtime failure, 2 on a usage error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lic/codec.h"
#include "lic/corpus.h"
#include "lic/errors.h"
#include "lic/eval.h"
#include "lic/image.h"
#include "lic/network.h"
#include "lic/refine.h"
#include "lic/training.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenCorpusArgs {
  fs::path out;
  std::string kind = "mixed";
  size_t train = 32;
  size_t test = 10;
  uint32_t width = 64;
  uint32_t height = 64;
  uint64_t seed = 1;
};

struct TrainArgs {
  fs::path manifest;
  std::string mode = "full";
  fs::path base;
  fs::path out;
  fs::path log;
  double lambda = 0.01;
  int steps = 20000;
  int batch = 8;
  int crop = 64;
  double lr = 1e-3;
  uint64_t seed = 1;
  int log_every = 100;
  int threads = 0;
};

struct CompressArgs {
  fs::path input;
  fs::path model;
  fs::path out;
  bool refine = false;
  int steps = 1500;
  double lr = 1e-3;
  fs::path trace;
  uint64_t seed = 0;
};

struct DecompressArgs {
  fs::path input;
  fs::path model;
  fs::path out;
};

struct EvalArgs {
  fs::path manifest;
  std::vector<fs::path> models;
  std::vector<fs::path> proba_models;
  std::vector<fs::path> retrained_models;
  std::vector<std::string> strategies = {"baseline", "+adapt"};
  std::vector<double> lambdas;
  std::string role = "test";
  int steps = 1500;
  double lr = 1e-3;
  uint64_t seed = 0;
  int threads = 0;
  fs::path out;
};

int RunGenCorpus(const GenCorpusArgs& a) {
  const std::optional<lic::CorpusKind> kind = lic::ParseCorpusKind(a.kind);
  if (!kind) throw UsageError("unknown corpus kind '" + a.kind + "'");
  lic::CorpusSpec spec;
  spec.kind = *kind;
  spec.train_count = a.train;
  spec.test_count = a.test;
  spec.width = a.width;
  spec.height = a.height;
  spec.seed = a.seed;
  const lic::CorpusManifest m = lic::GenerateCorpus(a.out, spec);
  std::cout << "manifest=" << (a.out / "manifest.txt").string()
            << " train=" << a.train << " test=" << a.test
            << " content_hash=" << std::hex << m.ContentHash() << std::dec
            << " seed=" << a.seed << "\n";
  return 0;
}

int RunTrain(const TrainArgs& a) {
  const std::optional<lic::TrainMode> mode = lic::ParseTrainMode(a.mode);
  if (!mode || *mode == lic::TrainMode::kFrozen) {
    throw UsageError("--mode must be 'full' or 'proba-only', got '" + a.mode +
                     "'");
  }
  if (*mode == lic::TrainMode::kProbaOnly && a.base.empty()) {
    throw UsageError("--mode proba-only requires --base <model>");
  }
  const lic::CorpusManifest manifest = lic::CorpusManifest::Load(a.manifest);
  const std::vector<lic::Tensor> corpus =
      lic::LoadRole(manifest, lic::Role::kTrain);

  lic::ModelParams init =
      a.base.empty() ? lic::InitializeModel(lic::ArchitectureConfig{}, a.lambda,
                                            a.seed)
                     : lic::LoadModel(a.base);
  lic::RDLossConfig loss;
  loss.lambda = a.lambda;
  lic::TrainSchedule schedule;
  schedule.steps = a.steps;
  schedule.batch_size = a.batch;
  schedule.crop_size = a.crop;
  schedule.learning_rate = a.lr;
  schedule.seed = a.seed;
  schedule.log_every = a.log_every;
  schedule.threads = a.threads;

  lic::TrainCallbacks callbacks;
  callbacks.on_log = [](const lic::TrainLogRow& row) {
    std::cerr << "step " << row.step << " loss " << row.loss << " bpp "
              << row.rate_bpp << " mse " << row.mse << "\n";
  };
  const lic::TrainResult r =
      lic::Train(corpus, init, *mode, loss, schedule, callbacks);
  lic::SaveModel(r.params, a.out);
  const fs::path log = a.log.empty() ? fs::path(a.out.string() + ".log.csv")
                                     : a.log;
  lic::AppendTrainLogCsv(log, r.log, *mode, a.lambda, a.seed);
  std::cout << "model=" << a.out.string() << " model_id=" << std::hex
            << r.params.ModelId() << std::dec
            << " steps=" << r.steps_completed
            << " aborted=" << (r.aborted ? 1 : 0) << " log=" << log.string()
            << " seed=" << a.seed << "\n";
  return r.aborted ? kExitRuntime : 0;
}

int RunCompress(const CompressArgs& a) {
  const lic::Image img = lic::ReadImage(a.input);
  const lic::ModelParams model = lic::LoadModel(a.model);
  const lic::Tensor x = lic::ImageToTensor(img);

  lic::EncodedImage enc;
  std::optional<lic::RefineResult> refinement;
  if (a.refine) {
    lic::RefineConfig rc;
    rc.max_steps = a.steps;
    rc.learning_rate = a.lr;
    rc.seed = a.seed;
    lic::RefinedEncoding r = lic::EncodeWithRefinement(x, model, rc);
    enc = std::move(r.encoded);
    refinement = std::move(r.refinement);
  } else {
    enc = lic::EncodeImage(x, model);
  }
  lic::WriteFileBytes(a.out, enc.bytes);

  if (!a.trace.empty()) {
    if (!refinement) throw UsageError("--trace requires --refine");
    std::ofstream t(a.trace);
    if (!t) throw lic::IoError("cannot write " + a.trace.string());
    lic::WriteRefineTrace(t, *refinement, a.seed);
  }

  const lic::DecodedImage dec = lic::DecodeImage(enc.bytes, model);
  const double pixels = static_cast<double>(img.width) * img.height;
  const double mse = lic::Mse255(img, lic::TensorToImage(dec.image));
  std::cout << std::setprecision(10) << "bytes=" << enc.bytes.size()
            << " payload_bytes=" << enc.header.payload_length
            << " bpp_payload=" << 8.0 * enc.header.payload_length / pixels
            << " bpp_total=" << 8.0 * enc.bytes.size() / pixels
            << " mse=" << mse << " psnr_db=" << lic::PsnrDb(mse)
            << " refine_steps=" << (a.refine ? a.steps : 0);
  if (refinement) {
    std::cout << " best_step=" << refinement->best().step
              << " diverged=" << (refinement->diverged ? 1 : 0);
  }
  std::cout << " seed=" << a.seed << "\n";
  return 0;
}

int RunDecompress(const DecompressArgs& a) {
  const std::vector<uint8_t> bytes = lic::ReadFileBytes(a.input);
  const lic::ModelParams model = lic::LoadModel(a.model);
  const lic::DecodedImage dec = lic::DecodeImage(bytes, model);
  lic::WriteImage(a.out, lic::TensorToImage(dec.image));
  std::cout << "width=" << dec.header.width << " height=" << dec.header.height
            << " out=" << a.out.string() << "\n";
  return 0;
}

int RunEval(const EvalArgs& a) {
  std::vector<lic::Strategy> strategies;
  for (const std::string& s : a.strategies) {
    const std::optional<lic::Strategy> st = lic::ParseStrategy(s);
    if (!st) throw UsageError("unknown strategy '" + s + "'");
    strategies.push_back(*st);
  }
  if (a.role != "train" && a.role != "test") {
    throw UsageError("--role must be train or test");
  }

  // Models keyed by the lambda they were trained for.
  std::vector<lic::ModelParams> storage;
  storage.reserve(a.models.size() + a.proba_models.size() +
                  a.retrained_models.size());
  auto load_all = [&](const std::vector<fs::path>& paths) {
    std::map<double, const lic::ModelParams*> by_lambda;
    for (const fs::path& p : paths) {
      storage.push_back(lic::LoadModel(p));
      by_lambda[storage.back().lambda] = &storage.back();
    }
    return by_lambda;
  };
  const auto base = load_all(a.models);
  const auto proba = load_all(a.proba_models);
  const auto retrained = load_all(a.retrained_models);

  std::vector<double> lambdas = a.lambdas;
  if (lambdas.empty()) {
    for (const auto& [l, m] : base) lambdas.push_back(l);
  }
  if (lambdas.empty()) throw UsageError("no models given (--model)");

  std::vector<lic::EvalModel> jobs;
  for (double l : lambdas) {
    for (lic::Strategy s : strategies) {
      const auto& table = s == lic::Strategy::kProba       ? proba
                          : s == lic::Strategy::kRetrained ? retrained
                                                           : base;
      const auto it = table.find(l);
      if (it == table.end()) {
        throw UsageError("no model for strategy " +
                         std::string(lic::StrategyLabel(s)) +
                         " at lambda " + std::to_string(l));
      }
      jobs.push_back({s, l, it->second});
    }
  }

  const lic::CorpusManifest manifest = lic::CorpusManifest::Load(a.manifest);
  std::vector<lic::EvalImage> images;
  for (const lic::ManifestEntry& e : manifest.WithRole(
           a.role == "train" ? lic::Role::kTrain : lic::Role::kTest)) {
    images.push_back({e.id, lic::ReadImage(manifest.Resolve(e))});
  }

  lic::EvalConfig cfg;
  cfg.refine_steps = a.steps;
  cfg.refine_lr = a.lr;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  const std::vector<lic::RDPoint> rows = lic::Evaluate(images, jobs, cfg);

  int failures = 0;
  for (const lic::RDPoint& r : rows) {
    if (!r.aggregate && !r.error.empty()) {
      ++failures;
      std::cerr << "failed: " << r.image_id << " " << r.strategy << " "
                << r.lambda << ": " << r.error << "\n";
    }
  }
  if (a.out.empty()) {
    lic::WriteRdCsv(std::cout, rows);
  } else {
    std::ofstream out(a.out);
    if (!out) throw lic::IoError("cannot write " + a.out.string());
    lic::WriteRdCsv(out, rows);
  }
  return failures == 0 ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned image codec with encode-time latent refinement"};
  app.require_subcommand(1);

  GenCorpusArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Write a synthetic corpus");
  gen_cmd->add_option("-o,--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--kind", gen.kind,
                      "gradients | textures | shapes | mixed");
  gen_cmd->add_option("--train", gen.train, "Training images");
  gen_cmd->add_option("--test", gen.test, "Test images");
  gen_cmd->add_option("--width", gen.width)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--height", gen.height)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--manifest", train.manifest)
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--mode", train.mode, "full | proba-only");
  train_cmd->add_option("--base", train.base, "Starting model")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("-o,--out", train.out, "Model file")->required();
  train_cmd->add_option("--log", train.log, "Training log CSV");
  train_cmd->add_option("--lambda", train.lambda)->check(CLI::PositiveNumber);
  train_cmd->add_option("--steps", train.steps)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--batch", train.batch)->check(CLI::PositiveNumber);
  train_cmd->add_option("--crop", train.crop)->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train.lr)->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--log-every", train.log_every)
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--threads", train.threads)
      ->check(CLI::NonNegativeNumber);

  CompressArgs comp;
  auto* comp_cmd = app.add_subcommand("compress", "Encode an image");
  comp_cmd->add_option("input", comp.input, "PNG or PPM image")->required();
  comp_cmd->add_option("-m,--model", comp.model)->required();
  comp_cmd->add_option("-o,--out", comp.out, "Bitstream file")->required();
  comp_cmd->add_flag("--refine", comp.refine, "Refine latents before coding");
  comp_cmd->add_option("--steps", comp.steps)->check(CLI::NonNegativeNumber);
  comp_cmd->add_option("--lr", comp.lr)->check(CLI::PositiveNumber);
  comp_cmd->add_option("--trace", comp.trace, "Refinement trace CSV");
  comp_cmd->add_option("--seed", comp.seed);

  DecompressArgs dec;
  auto* dec_cmd = app.add_subcommand("decompress", "Decode a bitstream");
  dec_cmd->add_option("input", dec.input, "Bitstream file")->required();
  dec_cmd->add_option("-m,--model", dec.model)->required();
  dec_cmd->add_option("-o,--out", dec.out, "Output image (.png or .ppm)")
      ->required();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Rate-distortion evaluation");
  eval_cmd->add_option("--manifest", ev.manifest)
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--model", ev.models, "Base models (one per lambda)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--proba-model", ev.proba_models,
                       "Prior-tuned models for +proba")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--retrained-model", ev.retrained_models,
                       "Fully retrained models")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--strategy", ev.strategies,
                       "baseline | +adapt | +proba | retrained")
      ->delimiter(',');
  eval_cmd->add_option("--lambda", ev.lambdas, "Restrict to these lambdas")
      ->delimiter(',');
  eval_cmd->add_option("--role", ev.role, "Manifest role to evaluate");
  eval_cmd->add_option("--steps", ev.steps)->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--lr", ev.lr)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", ev.seed);
  eval_cmd->add_option("--threads", ev.threads)
      ->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("-o,--out", ev.out, "CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return RunGenCorpus(gen);
    if (*train_cmd) return RunTrain(train);
    if (*comp_cmd) return RunCompress(comp);
    if (*dec_cmd) return RunDecompress(dec);
    if (*eval_cmd) return RunEval(ev);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const lic::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
