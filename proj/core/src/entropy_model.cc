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

#include "lic/entropy_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lic {

FactorizedPrior FactorizedPrior::Create(int channels, float loc, float scale) {
  if (channels < 1) throw ConfigError("prior needs at least one channel");
  if (!(scale > 0)) throw ConfigError("prior scale must be positive");
  FactorizedPrior p;
  p.loc = Tensor(Shape{channels}, loc);
  p.log_scale = Tensor(Shape{channels}, std::log(scale));
  return p;
}

double FactorizedPrior::scale(int c) const {
  return std::exp(static_cast<double>(log_scale[static_cast<size_t>(c)]));
}

void FactorizedPrior::Validate() const {
  if (loc.shape().size() != 1 || loc.shape() != log_scale.shape()) {
    throw ConfigError("prior parameters must be two [C] vectors, got " +
                      ShapeToString(loc.shape()) + " and " +
                      ShapeToString(log_scale.shape()));
  }
  if (support_min > support_max) throw ConfigError("empty symbol support");
  if (support_min < -32768 || support_max > 32767) {
    throw ConfigError("symbol support exceeds 16-bit range");
  }
  if (precision < 1 || precision > 16) {
    throw ConfigError("CDF precision must lie in [1, 16]");
  }
  if (static_cast<int64_t>(alphabet_size()) > (int64_t{1} << precision)) {
    throw ConfigError("support of " + std::to_string(alphabet_size()) +
                      " symbols too large for " + std::to_string(precision) +
                      "-bit CDF tables");
  }
  if (!loc.AllFinite() || !log_scale.AllFinite()) {
    throw ConfigError("non-finite prior parameters");
  }
}

double LogisticCdf(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double BinProbability(double v, double loc, double scale) {
  const double d = v - loc;
  const double upper = (d + 0.5) / scale;
  const double lower = (d - 0.5) / scale;
  // Mirror into the lower tail, where the CDF is small and differences of
  // it keep full relative precision.
  if (upper + lower > 0) {
    return LogisticCdf(-lower) - LogisticCdf(-upper);
  }
  return LogisticCdf(upper) - LogisticCdf(lower);
}

template <typename T>
BasicTensor<T> RelaxedLikelihood(const BasicTensor<T>& y,
                                 const FactorizedPrior& prior) {
  if (y.order() != 4 || y.dim(1) != prior.channels()) {
    throw InvalidInputError("relaxed_likelihood: latent " +
                            ShapeToString(y.shape()) + " does not match a " +
                            std::to_string(prior.channels()) +
                            "-channel prior");
  }
  BasicTensor<T> out(y.shape());
  const int64_t plane = y.dim(2) * y.dim(3);
  for (int64_t n = 0; n < y.dim(0); ++n) {
    for (int c = 0; c < prior.channels(); ++c) {
      const double mu = prior.location(c);
      const double s = prior.scale(c);
      const size_t base = static_cast<size_t>((n * y.dim(1) + c) * plane);
      for (int64_t i = 0; i < plane; ++i) {
        out[base + i] = static_cast<T>(BinProbability(y[base + i], mu, s));
      }
    }
  }
  return out;
}

template BasicTensor<float> RelaxedLikelihood(const BasicTensor<float>&,
                                              const FactorizedPrior&);
template BasicTensor<double> RelaxedLikelihood(const BasicTensor<double>&,
                                               const FactorizedPrior&);

double DiscretePmf(int64_t k, const FactorizedPrior& prior, int channel) {
  return BinProbability(static_cast<double>(k), prior.location(channel),
                        prior.scale(channel));
}

RateBits ComputeRateBits(const Tensor& y, const FactorizedPrior& prior,
                         RateMode mode) {
  if (y.order() != 4 || y.dim(1) != prior.channels()) {
    throw InvalidInputError("rate_bits: latent " + ShapeToString(y.shape()) +
                            " does not match a " +
                            std::to_string(prior.channels()) +
                            "-channel prior");
  }
  const double floor = std::ldexp(1.0, -prior.precision);
  const double floor_bits = static_cast<double>(prior.precision);
  RateBits out;
  const int64_t plane = y.dim(2) * y.dim(3);
  for (int64_t n = 0; n < y.dim(0); ++n) {
    for (int c = 0; c < prior.channels(); ++c) {
      const double mu = prior.location(c);
      const double s = prior.scale(c);
      const size_t base = static_cast<size_t>((n * y.dim(1) + c) * plane);
      for (int64_t i = 0; i < plane; ++i) {
        double v = y[base + i];
        if (mode == RateMode::kDiscrete) v = std::nearbyint(v);
        const double p = BinProbability(v, mu, s);
        if (p < floor) {
          ++out.floored;
          out.bits += floor_bits;
        } else {
          out.bits -= std::log2(p);
        }
      }
    }
  }
  return out;
}

std::vector<uint32_t> QuantizePmfToCdf(std::span<const double> pmf,
                                       int precision) {
  const int64_t total = int64_t{1} << precision;
  const int64_t n = static_cast<int64_t>(pmf.size());
  if (n < 1) throw ConfigError("cannot build a CDF over an empty alphabet");
  if (n > total) {
    throw ConfigError("alphabet of " + std::to_string(n) +
                      " symbols too large for " + std::to_string(precision) +
                      "-bit CDF tables");
  }
  double mass = 0;
  for (double p : pmf) {
    if (!(p >= 0) || !std::isfinite(p)) {
      throw ConfigError("PMF entries must be finite and non-negative");
    }
    mass += p;
  }
  if (!(mass > 0)) throw ConfigError("PMF has zero total mass");

  std::vector<int64_t> freq(static_cast<size_t>(n));
  int64_t assigned = 0;
  for (int64_t i = 0; i < n; ++i) {
    const double ideal = pmf[static_cast<size_t>(i)] / mass *
                         static_cast<double>(total);
    freq[static_cast<size_t>(i)] =
        std::max<int64_t>(1, static_cast<int64_t>(std::llround(ideal)));
    assigned += freq[static_cast<size_t>(i)];
  }
  // Settle the rounding residue on the symbols where a one-unit change costs
  // the least code length: the largest frequencies.
  while (assigned != total) {
    size_t best = 0;
    for (size_t i = 1; i < freq.size(); ++i) {
      if (freq[i] > freq[best]) best = i;
    }
    if (assigned < total) {
      const int64_t add = total - assigned;
      freq[best] += add;
      assigned += add;
    } else {
      const int64_t spare = freq[best] - 1;
      const int64_t take = std::min(spare, assigned - total);
      freq[best] -= take;
      assigned -= take;
    }
  }
  std::vector<uint32_t> cdf(static_cast<size_t>(n + 1), 0);
  for (int64_t i = 0; i < n; ++i) {
    cdf[static_cast<size_t>(i + 1)] =
        cdf[static_cast<size_t>(i)] +
        static_cast<uint32_t>(freq[static_cast<size_t>(i)]);
  }
  return cdf;
}

std::vector<double> ChannelAlphabetPmf(const FactorizedPrior& prior,
                                       int channel) {
  const double mu = prior.location(channel);
  const double s = prior.scale(channel);
  std::vector<double> pmf;
  pmf.reserve(static_cast<size_t>(prior.alphabet_size()));
  for (int k = prior.support_min; k <= prior.support_max; ++k) {
    pmf.push_back(BinProbability(k, mu, s));
  }
  const double below = LogisticCdf((prior.support_min - 0.5 - mu) / s);
  const double above = LogisticCdf(-(prior.support_max + 0.5 - mu) / s);
  pmf.push_back(below + above);
  return pmf;
}

CdfTables BuildCdfTables(const FactorizedPrior& prior) {
  prior.Validate();
  CdfTables tables;
  tables.support_min = prior.support_min;
  tables.support_max = prior.support_max;
  tables.precision = prior.precision;
  tables.cdf.reserve(static_cast<size_t>(prior.channels()));
  for (int c = 0; c < prior.channels(); ++c) {
    const std::vector<double> pmf = ChannelAlphabetPmf(prior, c);
    tables.cdf.push_back(QuantizePmfToCdf(pmf, prior.precision));
  }
  return tables;
}

}  // namespace lic
