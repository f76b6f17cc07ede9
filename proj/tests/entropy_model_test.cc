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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "lic/rng.h"
#include "lic/tape.h"
#include "test_util.h"

namespace lic {
namespace {

using testing::RandomTensor;

FactorizedPrior OneChannel(double loc, double scale) {
  return FactorizedPrior::Create(1, static_cast<float>(loc),
                                 static_cast<float>(scale));
}

TEST(LogisticTest, BinProbabilityValues) {
  // sigma(1) - sigma(-1)
  EXPECT_NEAR(BinProbability(0.0, 0.0, 0.5), 0.46211715726, 1e-10);
  // sigma(0.5) - sigma(-0.5)
  EXPECT_NEAR(BinProbability(0.0, 0.0, 1.0), 0.24491866240, 1e-10);
  EXPECT_NEAR(LogisticCdf(0.0), 0.5, 1e-15);
}

TEST(LogisticTest, SymmetricAboutLocation) {
  for (double t : {0.0, 0.3, 1.7, 12.5, 80.0}) {
    EXPECT_NEAR(BinProbability(2.25 + t, 2.25, 0.8),
                BinProbability(2.25 - t, 2.25, 0.8), 1e-15);
  }
}

TEST(LogisticTest, TailsDoNotCancel) {
  // Far in either tail the mass is tiny but positive and symmetric.
  const double right = BinProbability(60.0, 0.0, 1.0);
  const double left = BinProbability(-60.0, 0.0, 1.0);
  EXPECT_GT(right, 0.0);
  EXPECT_NEAR(right / left, 1.0, 1e-12);
  EXPECT_NEAR(std::log(right), -60.0 + std::log(std::sinh(0.5) * 2), 1e-6);
}

TEST(LogisticTest, IntegerSumIsOne) {
  double sum = 0;
  for (int k = -1000; k <= 1000; ++k) sum += BinProbability(k, 0.0, 1.0);
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(DiscretePmfTest, EqualsRelaxedLikelihoodAtIntegers) {
  FactorizedPrior prior = FactorizedPrior::Create(2, 0.0f, 1.0f);
  prior.loc[1] = 1.3f;
  prior.log_scale[1] = std::log(2.5f);
  Tensor64 y(Shape{1, 2, 1, 21});
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < 21; ++i) y.at(0, c, 0, i) = i - 10;
  }
  const Tensor64 p = RelaxedLikelihood(y, prior);
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < 21; ++i) {
      EXPECT_EQ(DiscretePmf(i - 10, prior, c), p.at(0, c, 0, i));
    }
  }
}

TEST(DiscretePmfTest, ArgmaxIsRoundedLocation) {
  for (double mu : {-3.7, -0.2, 0.0, 0.49, 2.6, 10.1}) {
    FactorizedPrior prior = OneChannel(mu, 1.3);
    int64_t best = -100;
    for (int64_t k = -30; k <= 30; ++k) {
      if (DiscretePmf(k, prior, 0) > DiscretePmf(best, prior, 0)) best = k;
    }
    EXPECT_EQ(best, std::lround(mu)) << "mu=" << mu;
  }
}

// Window sum plus the two analytic tails, for randomized parameters.
TEST(DiscretePmfTest, SumsToOneWithAnalyticTails) {
  CounterRng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const double mu = -20 + 40 * rng.NextUniform();
    const double s = std::exp(-3 + 6 * rng.NextUniform());
    FactorizedPrior prior = OneChannel(mu, s);
    const double scale = prior.scale(0);
    const double loc = prior.location(0);
    const int lo = -64, hi = 63;
    double sum = 0;
    for (int k = lo; k <= hi; ++k) sum += DiscretePmf(k, prior, 0);
    sum += LogisticCdf((lo - 0.5 - loc) / scale);
    sum += LogisticCdf(-(hi + 0.5 - loc) / scale);
    EXPECT_NEAR(sum, 1.0, 1e-9) << "mu=" << mu << " s=" << s;
  }
}

TEST(RateBitsTest, EightBitsForProbabilityOneIn256) {
  Tape<double> tape;
  const Var p = tape.Leaf(Tensor64(Shape{1}, 1.0 / 256));
  EXPECT_DOUBLE_EQ(tape.value(tape.NegLog2Sum(p, 1e-9)).item(), 8.0);
}

TEST(RateBitsTest, DiscreteMatchesHighPrecisionSum) {
  FactorizedPrior prior = FactorizedPrior::Create(48);
  CounterRng rng(7);
  for (int c = 0; c < 48; ++c) {
    prior.loc[c] = static_cast<float>(-2 + 4 * rng.NextUniform());
    prior.log_scale[c] = static_cast<float>(-0.5 + 2 * rng.NextUniform());
  }
  const Tensor y = RandomTensor<float>(Shape{1, 48, 8, 8}, 8, -6, 6);
  const RateBits r = ComputeRateBits(y, prior, RateMode::kDiscrete);

  long double oracle = 0;
  for (int c = 0; c < 48; ++c) {
    const long double mu = prior.loc[c];
    const long double s = std::exp(static_cast<long double>(prior.log_scale[c]));
    for (int i = 0; i < 64; ++i) {
      const long double k = std::nearbyint(y[c * 64 + i]);
      auto sig = [](long double t) { return 1.0L / (1.0L + std::exp(-t)); };
      const long double p = sig((k - mu + 0.5L) / s) - sig((k - mu - 0.5L) / s);
      oracle -= std::log2(p);
    }
  }
  EXPECT_EQ(r.floored, 0);
  EXPECT_NEAR(r.bits, static_cast<double>(oracle),
              0.005 * static_cast<double>(oracle));
}

TEST(RateBitsTest, RoundedLocationIsMinimalRate) {
  FactorizedPrior prior = FactorizedPrior::Create(3);
  prior.loc[0] = 1.2f;
  prior.loc[1] = -0.7f;
  prior.loc[2] = 4.0f;
  Tensor at_mode(Shape{1, 3, 2, 2});
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 4; ++i) at_mode[c * 4 + i] = std::nearbyint(prior.loc[c]);
  }
  const double best = ComputeRateBits(at_mode, prior, RateMode::kDiscrete).bits;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Tensor y = RandomTensor<float>(Shape{1, 3, 2, 2}, seed, -5, 5);
    EXPECT_LE(best, ComputeRateBits(y, prior, RateMode::kDiscrete).bits);
  }
}

TEST(RateBitsTest, UnderflowIsFlooredAndCounted) {
  FactorizedPrior prior = OneChannel(0.0, 0.1);
  Tensor y(Shape{1, 1, 1, 2}, std::vector<float>{0.0f, 500.0f});
  const RateBits r = ComputeRateBits(y, prior, RateMode::kRelaxed);
  EXPECT_EQ(r.floored, 1);
  EXPECT_TRUE(std::isfinite(r.bits));
  EXPECT_NEAR(r.bits, 16.0 - std::log2(BinProbability(0, 0, prior.scale(0))),
              1e-9);
}

TEST(RateBitsTest, ChannelMismatchRejected) {
  EXPECT_THROW(ComputeRateBits(Tensor(Shape{1, 2, 1, 1}),
                               FactorizedPrior::Create(3), RateMode::kRelaxed),
               InvalidInputError);
}

void ExpectValidTable(const std::vector<uint32_t>& cdf, int precision) {
  ASSERT_FALSE(cdf.empty());
  EXPECT_EQ(cdf.front(), 0u);
  EXPECT_EQ(cdf.back(), 1u << precision);
  for (size_t i = 1; i < cdf.size(); ++i) ASSERT_GT(cdf[i], cdf[i - 1]) << i;
}

TEST(CdfTablesTest, LayoutAndMonotone) {
  FactorizedPrior prior = FactorizedPrior::Create(4);
  prior.loc[1] = 30.0f;
  prior.log_scale[2] = -4.0f;
  prior.log_scale[3] = 6.0f;
  const CdfTables t = BuildCdfTables(prior);
  ASSERT_EQ(t.cdf.size(), 4u);
  for (const auto& cdf : t.cdf) {
    EXPECT_EQ(cdf.size(),
              static_cast<size_t>(prior.support_max - prior.support_min + 3));
    ExpectValidTable(cdf, 16);
  }
}

TEST(CdfTablesTest, RandomizedPriorsAreValid) {
  CounterRng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    FactorizedPrior prior =
        OneChannel(-70 + 140 * rng.NextUniform(),
                   std::exp(-4 + 9 * rng.NextUniform()));
    const CdfTables t = BuildCdfTables(prior);
    ExpectValidTable(t.cdf[0], 16);
  }
}

TEST(CdfTablesTest, HugeScaleGivesNearUniformWidths) {
  const CdfTables t = BuildCdfTables(OneChannel(-0.5, 1e6));
  const auto& cdf = t.cdf[0];
  int64_t lo = 1 << 16, hi = 0;
  for (int i = 0; i + 1 < t.escape_index() + 1; ++i) {
    const int64_t w = cdf[i + 1] - cdf[i];
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  EXPECT_LE(hi - lo, 1);
}

TEST(CdfTablesTest, QuantizedWidthsSumToOne) {
  const std::vector<double> pmf = {0.5, 0.25, 0.125, 0.0625, 0.0625, 0.0};
  const std::vector<uint32_t> cdf = QuantizePmfToCdf(pmf, 16);
  ExpectValidTable(cdf, 16);
  // The zero-mass symbol still gets width 1, taken from the largest.
  EXPECT_EQ(cdf[1], 32767u);
  EXPECT_EQ(cdf[2] - cdf[1], 16384u);
  EXPECT_EQ(cdf[6] - cdf[5], 1u);
}

double TableKl(const std::vector<double>& pmf,
               const std::vector<uint32_t>& cdf) {
  double kl = 0;
  for (size_t i = 0; i < pmf.size(); ++i) {
    if (pmf[i] <= 0) continue;
    const double q = (cdf[i + 1] - cdf[i]) / 65536.0;
    kl += pmf[i] * std::log2(pmf[i] / q);
  }
  return kl;
}

// Unavoidable cost of giving every symbol at least 2^-16: the mass lifted
// onto improbable symbols is taken from the probable ones.
double FloorPenalty(const std::vector<double>& pmf) {
  double lifted = 0;
  for (double p : pmf) lifted += std::max(0.0, 1.0 / 65536 - p);
  return -std::log2(1.0 - lifted);
}

TEST(CdfTablesTest, KlDivergenceIsSmallForBroadPriors) {
  CounterRng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    FactorizedPrior prior = OneChannel(-10 + 20 * rng.NextUniform(),
                                       6 + 40 * rng.NextUniform());
    const std::vector<double> pmf = ChannelAlphabetPmf(prior, 0);
    EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-12);
    EXPECT_LE(TableKl(pmf, QuantizePmfToCdf(pmf, 16)), 1e-3)
        << "loc=" << prior.location(0) << " scale=" << prior.scale(0);
  }
}

TEST(CdfTablesTest, KlDivergenceBeyondFloorPenaltyIsSmall) {
  CounterRng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    FactorizedPrior prior = OneChannel(-10 + 20 * rng.NextUniform(),
                                       std::exp(-3 + 6 * rng.NextUniform()));
    const std::vector<double> pmf = ChannelAlphabetPmf(prior, 0);
    const double kl = TableKl(pmf, QuantizePmfToCdf(pmf, 16));
    EXPECT_GE(kl, 0.0);
    EXPECT_LE(kl - FloorPenalty(pmf), 1e-3)
        << "loc=" << prior.location(0) << " scale=" << prior.scale(0);
  }
}

TEST(CdfTablesTest, SupportTooLargeForPrecision) {
  FactorizedPrior prior = FactorizedPrior::Create(1);
  prior.support_min = -40000;
  prior.support_max = 40000;
  EXPECT_THROW(BuildCdfTables(prior), ConfigError);
  prior.support_min = -64;
  prior.support_max = 63;
  prior.precision = 7;
  EXPECT_THROW(BuildCdfTables(prior), ConfigError);
}

}  // namespace
}  // namespace lic
