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

// Encoder/decoder transforms, their parameters, and the model file.
//
// The encoder is a stack of strided 5x5 convolutions with leaky-ReLU
// between layers; the decoder mirrors it with transposed convolutions.
// Parameters live in three groups so training can select which ones move:
// encoder, decoder and the factorized prior.

#ifndef LIC_NETWORK_H_
#define LIC_NETWORK_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lic/entropy_model.h"
#include "lic/tape.h"
#include "lic/tensor.h"

namespace lic {

struct ArchitectureConfig {
  int kernel_size = 5;
  // Output channels of each encoder layer; the last entry is the latent
  // channel count C. The decoder mirrors these back down to 3.
  std::vector<int> channels = {32, 64, 48};
  std::vector<int> strides = {2, 2, 2};
  float leaky_slope = 0.2f;

  int layers() const { return static_cast<int>(channels.size()); }
  int latent_channels() const { return channels.back(); }
  // Total spatial down-sampling factor D.
  int downsampling() const;

  PadSpec encoder_pad() const;
  PadSpec decoder_pad(int stride) const;

  // Throws ConfigError.
  void Validate() const;

  friend bool operator==(const ArchitectureConfig&,
                         const ArchitectureConfig&) = default;
};

struct ModelParams {
  ArchitectureConfig arch;
  double lambda = 0.01;
  uint64_t init_seed = 0;
  // [kernel0, bias0, kernel1, bias1, ...]; encoder kernels are
  // [out, in, k, k], decoder kernels [in, out, k, k].
  std::vector<Tensor> encoder;
  std::vector<Tensor> decoder;
  FactorizedPrior prior;

  // Content hash of every parameter byte in group order.
  uint64_t ModelId() const;
  bool AllFinite() const;
};

// Uniform fan-in scaled kernels (He bound for the leaky slope), zero
// biases, unit-scale zero-mean prior. Deterministic in `seed`.
ModelParams InitializeModel(const ArchitectureConfig& arch, double lambda,
                            uint64_t seed);

// Which parameter groups receive gradients in a graph.
struct GroupMask {
  bool encoder = false;
  bool decoder = false;
  bool prior = false;
};

struct NetworkVars {
  std::vector<Var> encoder;
  std::vector<Var> decoder;
  Var prior_loc;
  Var prior_log_scale;
};

// Records every parameter as a leaf, converting to T.
template <typename T>
NetworkVars RegisterParams(Tape<T>& tape, const ModelParams& params,
                           GroupMask trainable);

template <typename T>
Var EncodeGraph(Tape<T>& tape, const ArchitectureConfig& arch,
                std::span<const Var> encoder, Var x);

// Unclamped decoder output.
template <typename T>
Var DecodeGraph(Tape<T>& tape, const ArchitectureConfig& arch,
                std::span<const Var> decoder, Var y);

// y = psi(x) for x of shape [N, 3, H, W] with H, W divisible by D.
template <typename T>
BasicTensor<T> EncodeForward(const ModelParams& params,
                             const BasicTensor<T>& x);

enum class DecoderOutput { kClamped, kRaw };

// x_hat = phi(y) for y of shape [N, C, h, w]. `op_count`, when given,
// receives the number of ops the decode executed.
template <typename T>
BasicTensor<T> DecodeForward(const ModelParams& params,
                             const BasicTensor<T>& y,
                             DecoderOutput output = DecoderOutput::kClamped,
                             size_t* op_count = nullptr);

inline constexpr uint8_t kModelFormatVersion = 1;

std::vector<uint8_t> SerializeModel(const ModelParams& params);
// Throws CorruptModelError (truncation, bad magic, hash mismatch) or
// UnsupportedVersionError.
ModelParams DeserializeModel(std::span<const uint8_t> bytes);

void SaveModel(const ModelParams& params, const std::filesystem::path& path);
ModelParams LoadModel(const std::filesystem::path& path);

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes);

}  // namespace lic

#endif  // LIC_NETWORK_H_
