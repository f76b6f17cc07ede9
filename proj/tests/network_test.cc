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

#include "lic/network.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "lic/image.h"
#include "test_util.h"

namespace lic {
namespace {

using testing::RandomTensor;

ArchitectureConfig SmallArch() {
  ArchitectureConfig a;
  a.channels = {8, 12, 6};
  return a;
}

TEST(ArchitectureTest, DefaultsAndValidation) {
  const ArchitectureConfig a;
  EXPECT_EQ(a.downsampling(), 8);
  EXPECT_EQ(a.latent_channels(), 48);
  EXPECT_EQ(a.layers(), 3);
  EXPECT_NO_THROW(a.Validate());
  ArchitectureConfig bad = a;
  bad.strides = {2, 2};
  EXPECT_THROW(bad.Validate(), ConfigError);
  bad = a;
  bad.kernel_size = 4;
  EXPECT_THROW(bad.Validate(), ConfigError);
  bad = a;
  bad.strides = {2, 4, 2};
  EXPECT_THROW(bad.Validate(), ConfigError);
  bad = a;
  bad.leaky_slope = 0;
  EXPECT_THROW(bad.Validate(), ConfigError);
}

TEST(EncodeForwardTest, ZeroImagePropagatesFinalBias) {
  ModelParams p = InitializeModel(SmallArch(), 0.01, 1);
  Tensor& bias = p.encoder.back();
  for (size_t c = 0; c < bias.size(); ++c) bias[c] = 0.25f * c - 0.5f;
  const Tensor y = EncodeForward(p, Tensor(Shape{1, 3, 16, 24}));
  ASSERT_EQ(y.shape(), (Shape{1, 6, 2, 3}));
  for (int c = 0; c < 6; ++c) {
    for (int i = 0; i < 6; ++i) EXPECT_EQ(y[c * 6 + i], bias[c]);
  }
}

TEST(EncodeForwardTest, LatentShape) {
  ArchitectureConfig a;
  a.channels = {32, 64, 32};
  const ModelParams p = InitializeModel(a, 0.01, 2);
  EXPECT_EQ(EncodeForward(p, Tensor(Shape{1, 3, 64, 64})).shape(),
            (Shape{1, 32, 8, 8}));
}

TEST(EncodeForwardTest, FloatAgreesWithDouble) {
  const ModelParams p = InitializeModel(ArchitectureConfig{}, 0.01, 3);
  const Tensor64 x = RandomTensor(Shape{1, 3, 32, 32}, 4, 0, 1);
  const Tensor64 y64 = EncodeForward(p, x);
  const Tensor y32 = EncodeForward(p, x.Cast<float>());
  for (size_t i = 0; i < y64.size(); ++i) {
    ASSERT_NEAR(y32[i], y64[i], 1e-3);
  }
}

TEST(EncodeForwardTest, RejectsNonDivisibleExtents) {
  const ModelParams p = InitializeModel(ArchitectureConfig{}, 0.01, 5);
  try {
    EncodeForward(p, Tensor(Shape{1, 3, 64, 60}));
    FAIL() << "expected InvalidInputError";
  } catch (const InvalidInputError& e) {
    EXPECT_NE(std::string(e.what()).find("multiples of 8"), std::string::npos)
        << e.what();
  }
  EXPECT_THROW(EncodeForward(p, Tensor(Shape{1, 1, 8, 8})), InvalidInputError);
}

TEST(DecodeForwardTest, ShapeAndClamp) {
  ArchitectureConfig a;
  a.channels = {32, 64, 32};
  const ModelParams p = InitializeModel(a, 0.01, 6);
  const Tensor y = RandomTensor<float>(Shape{1, 32, 8, 8}, 7, -100, 100);
  const Tensor x = DecodeForward(p, y);
  EXPECT_EQ(x.shape(), (Shape{1, 3, 64, 64}));
  for (float v : x.data()) {
    ASSERT_GE(v, 0.0f);
    ASSERT_LE(v, 1.0f);
  }
  const Tensor raw = DecodeForward(p, y, DecoderOutput::kRaw);
  bool outside = false;
  for (float v : raw.data()) outside = outside || v < 0 || v > 1;
  EXPECT_TRUE(outside);
  EXPECT_THROW(DecodeForward(p, Tensor(Shape{1, 31, 8, 8})), InvalidInputError);
}

TEST(DecodeForwardTest, ShapeContractAcrossConfigs) {
  std::vector<ArchitectureConfig> configs(4);
  configs[1].channels = {4, 5};
  configs[1].strides = {2, 2};
  configs[1].kernel_size = 3;
  configs[2].channels = {4, 4, 4};
  configs[2].strides = {2, 1, 2};
  configs[3].channels = {6};
  configs[3].strides = {3};
  configs[3].kernel_size = 7;
  for (const ArchitectureConfig& a : configs) {
    const ModelParams p = InitializeModel(a, 0.01, 8);
    const int d = a.downsampling();
    const Tensor x = RandomTensor<float>(Shape{2, 3, 3 * d, 2 * d}, 9, 0, 1);
    EXPECT_EQ(DecodeForward(p, EncodeForward(p, x)).shape(), x.shape());
  }
}

TEST(DecodeForwardTest, Deterministic) {
  const ModelParams p = InitializeModel(ArchitectureConfig{}, 0.01, 10);
  const Tensor x = RandomTensor<float>(Shape{1, 3, 32, 40}, 11, 0, 1);
  EXPECT_EQ(DecodeForward(p, EncodeForward(p, x)),
            DecodeForward(p, EncodeForward(p, x)));
}

TEST(ModelFileTest, SaveLoadSaveIsByteIdentical) {
  ModelParams p = InitializeModel(SmallArch(), 0.03, 12);
  p.prior.loc[2] = 1.5f;
  const std::vector<uint8_t> a = SerializeModel(p);
  const ModelParams q = DeserializeModel(a);
  EXPECT_EQ(SerializeModel(q), a);
  EXPECT_EQ(q.ModelId(), p.ModelId());
  EXPECT_EQ(q.lambda, 0.03);
  EXPECT_EQ(q.init_seed, 12u);
  EXPECT_EQ(q.arch, p.arch);

  const auto dir = testing::TempDir("model_file");
  SaveModel(p, dir / "m.lic");
  EXPECT_EQ(ReadFileBytes(dir / "m.lic"), a);
  EXPECT_EQ(LoadModel(dir / "m.lic").ModelId(), p.ModelId());
  EXPECT_THROW(LoadModel(dir / "missing.lic"), IoError);
}

TEST(ModelFileTest, Errors) {
  const std::vector<uint8_t> good =
      SerializeModel(InitializeModel(SmallArch(), 0.01, 13));
  for (size_t cut : {size_t{1}, size_t{9}, good.size() / 2, good.size() - 4}) {
    const std::vector<uint8_t> truncated(good.begin(), good.end() - cut);
    EXPECT_THROW(DeserializeModel(truncated), CorruptModelError) << cut;
  }
  std::vector<uint8_t> flipped = good;
  flipped[good.size() / 2] ^= 0x01;
  EXPECT_THROW(DeserializeModel(flipped), CorruptModelError);
  std::vector<uint8_t> version = good;
  version[4] = 2;
  EXPECT_THROW(DeserializeModel(version), UnsupportedVersionError);
  std::vector<uint8_t> magic = good;
  magic[0] = 'X';
  EXPECT_THROW(DeserializeModel(magic), CorruptModelError);
}

TEST(ModelIdTest, SensitiveToEveryByte) {
  ModelParams p = InitializeModel(SmallArch(), 0.01, 14);
  for (Tensor& t : p.encoder) t.Fill(0);
  for (Tensor& t : p.decoder) t.Fill(0);
  const uint64_t id = p.ModelId();
  p.decoder.back()[0] = 1e-6f;
  EXPECT_NE(p.ModelId(), id);
  p.decoder.back()[0] = 0;
  EXPECT_EQ(p.ModelId(), id);
  p.prior.log_scale[0] = std::nextafter(p.prior.log_scale[0], 1.0f);
  EXPECT_NE(p.ModelId(), id);
}

TEST(InitializeModelTest, SeededAndFinite) {
  const ModelParams a = InitializeModel(ArchitectureConfig{}, 0.01, 15);
  const ModelParams b = InitializeModel(ArchitectureConfig{}, 0.01, 15);
  const ModelParams c = InitializeModel(ArchitectureConfig{}, 0.01, 16);
  EXPECT_EQ(SerializeModel(a), SerializeModel(b));
  EXPECT_NE(a.ModelId(), c.ModelId());
  EXPECT_TRUE(a.AllFinite());
  ASSERT_EQ(a.encoder.size(), 6u);
  EXPECT_EQ(a.encoder[0].shape(), (Shape{32, 3, 5, 5}));
  EXPECT_EQ(a.decoder[0].shape(), (Shape{48, 64, 5, 5}));
  for (size_t i = 1; i < a.encoder.size(); i += 2) {
    for (float v : a.encoder[i].data()) EXPECT_EQ(v, 0.0f);
  }
  EXPECT_THROW(InitializeModel(ArchitectureConfig{}, 0.0, 1), ConfigError);
}

}  // namespace
}  // namespace lic
