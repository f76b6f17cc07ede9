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

// Factorized latent prior: an independent logistic density per latent
// channel. The same closed form serves as the noise-relaxed likelihood used
// during optimization and as the exact PMF of rounded latents, and is
// quantized into integer CDF tables for the range coder.

#ifndef LIC_ENTROPY_MODEL_H_
#define LIC_ENTROPY_MODEL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "lic/tensor.h"

namespace lic {

inline constexpr int kDefaultSupportMin = -64;
inline constexpr int kDefaultSupportMax = 63;
inline constexpr int kDefaultCdfPrecision = 16;

struct FactorizedPrior {
  Tensor loc;        // [C]
  Tensor log_scale;  // [C]; scale = exp(log_scale) > 0
  int support_min = kDefaultSupportMin;
  int support_max = kDefaultSupportMax;
  int precision = kDefaultCdfPrecision;

  static FactorizedPrior Create(int channels, float loc = 0.0f,
                                float scale = 1.0f);

  int channels() const { return static_cast<int>(loc.size()); }
  double location(int c) const { return loc[static_cast<size_t>(c)]; }
  double scale(int c) const;

  // In-range symbols plus the escape symbol.
  int alphabet_size() const { return support_max - support_min + 2; }
  int escape_index() const { return support_max - support_min + 1; }

  // Throws ConfigError on inconsistent support/precision or parameters.
  void Validate() const;
};

double LogisticCdf(double t);

// Probability mass of [v - 1/2, v + 1/2] under Logistic(loc, scale),
// evaluated without cancellation in either tail.
double BinProbability(double v, double loc, double scale);

// Element-wise BinProbability over an NCHW tensor, channel c using the
// prior's channel-c parameters. The differentiable version is
// Tape::RelaxedLikelihood.
template <typename T>
BasicTensor<T> RelaxedLikelihood(const BasicTensor<T>& y,
                                 const FactorizedPrior& prior);

// P(Y = k) for integer k in channel c; identical to BinProbability(k).
double DiscretePmf(int64_t k, const FactorizedPrior& prior, int channel);

enum class RateMode { kDiscrete, kRelaxed };

struct RateBits {
  double bits = 0;
  // Elements whose probability fell below 2^-precision and were floored.
  int64_t floored = 0;
};

// -sum(log2 p) over an NCHW tensor. kDiscrete rounds each element to the
// nearest integer first; kRelaxed evaluates the relaxed density at the
// value as given.
RateBits ComputeRateBits(const Tensor& y, const FactorizedPrior& prior,
                         RateMode mode);

// Integer cumulative tables, one per channel. cdf[c] has alphabet_size()+1
// entries: cdf[c][0] == 0, strictly increasing, cdf[c].back() ==
// 2^precision. Symbol i covers [cdf[i], cdf[i+1]); index
// (v - support_min) for in-range v, escape_index() otherwise.
struct CdfTables {
  int support_min = kDefaultSupportMin;
  int support_max = kDefaultSupportMax;
  int precision = kDefaultCdfPrecision;
  std::vector<std::vector<uint32_t>> cdf;

  int alphabet_size() const { return support_max - support_min + 2; }
  int escape_index() const { return support_max - support_min + 1; }
};

// Quantizes a probability vector to integer frequencies summing to
// 2^precision, each at least 1. Returns the cumulative table (size n+1).
std::vector<uint32_t> QuantizePmfToCdf(std::span<const double> pmf,
                                       int precision);

// The exact per-channel distribution over the coder alphabet: in-range
// masses followed by the combined tail mass assigned to the escape symbol.
std::vector<double> ChannelAlphabetPmf(const FactorizedPrior& prior,
                                       int channel);

CdfTables BuildCdfTables(const FactorizedPrior& prior);

}  // namespace lic

#endif  // LIC_ENTROPY_MODEL_H_
