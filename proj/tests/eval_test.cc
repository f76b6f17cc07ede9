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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lic/corpus.h"
#include "lic/image.h"
#include "test_util.h"

namespace lic {
namespace {

using testing::TempDir;

TEST(EvalTest, PsnrOracle) {
  EXPECT_NEAR(PsnrDb(1.0), 48.1308036087, 1e-9);
  EXPECT_NEAR(PsnrDb(255.0 * 255.0), 0.0, 1e-12);
  EXPECT_TRUE(std::isinf(PsnrDb(0.0)));
}

TEST(EvalTest, Mse255) {
  Image a(2, 1), b(2, 1);
  b.rgb = {1, 2, 3, 0, 0, 6};
  EXPECT_DOUBLE_EQ(Mse255(a, b), (1 + 4 + 9 + 36) / 6.0);
  EXPECT_THROW(Mse255(a, Image(1, 1)), InvalidInputError);
}

TEST(EvalTest, StrategyLabels) {
  for (Strategy s : {Strategy::kBaseline, Strategy::kAdapt, Strategy::kProba,
                     Strategy::kRetrained}) {
    EXPECT_EQ(ParseStrategy(StrategyLabel(s)), s);
  }
  EXPECT_FALSE(ParseStrategy("adapt").has_value());
}

TEST(EvalTest, RowsAndAggregates) {
  const ModelParams model = InitializeModel(ArchitectureConfig{}, 0.01, 5);
  const std::vector<uint8_t> before = SerializeModel(model);
  const std::vector<EvalImage> images = {
      {"a", SyntheticImage(CorpusKind::kGradients, 24, 16, 1, 0)},
      {"b", SyntheticImage(CorpusKind::kShapes, 16, 24, 1, 1)}};
  EvalConfig cfg;
  cfg.refine_steps = 10;
  cfg.threads = 2;
  const std::vector<RDPoint> rows =
      Evaluate(images,
               {{Strategy::kBaseline, 0.01, &model},
                {Strategy::kAdapt, 0.01, &model}},
               cfg);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].image_id, "a");
  EXPECT_EQ(rows[0].strategy, "baseline");
  EXPECT_EQ(rows[1].strategy, "+adapt");
  EXPECT_EQ(rows[1].refine_steps, 10);
  EXPECT_EQ(rows[2].image_id, "b");
  for (int i = 0; i < 4; ++i) {
    EXPECT_TRUE(rows[i].error.empty()) << rows[i].error;
    EXPECT_GT(rows[i].bpp_total, rows[i].bpp_payload);
    EXPECT_NEAR(rows[i].psnr_db, PsnrDb(rows[i].mse), 1e-12);
  }
  EXPECT_EQ(rows[4].image_id, "mean");
  EXPECT_TRUE(rows[4].aggregate);
  EXPECT_DOUBLE_EQ(rows[4].mse, (rows[0].mse + rows[2].mse) / 2);
  EXPECT_DOUBLE_EQ(rows[5].bpp_payload,
                   (rows[1].bpp_payload + rows[3].bpp_payload) / 2);
  EXPECT_EQ(SerializeModel(model), before);
}

TEST(EvalTest, FailuresBecomeNanRows) {
  const EvalImage img{"x", SyntheticImage(CorpusKind::kShapes, 8, 8, 1, 0)};
  const RDPoint p = EvaluateOne(img, 0, {Strategy::kBaseline, 0.01, nullptr},
                                EvalConfig{});
  EXPECT_FALSE(p.error.empty());
  EXPECT_TRUE(std::isnan(p.bpp_payload));
  const std::vector<RDPoint> agg = AggregateRows({p});
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_TRUE(std::isnan(agg[0].mse));
  EXPECT_FALSE(agg[0].error.empty());
}

TEST(EvalTest, CsvLayout) {
  RDPoint p;
  p.image_id = "img";
  p.lambda = 0.03;
  p.strategy = "+proba";
  p.bpp_payload = 0.5;
  p.bpp_total = 0.75;
  p.mse = 10;
  p.psnr_db = 38.1308036087;
  p.seed = 9;
  std::ostringstream out;
  WriteRdCsv(out, {p});
  EXPECT_EQ(out.str(),
            "image_id,lambda,strategy,bpp_payload,bpp_total,mse,psnr_db,"
            "refine_steps,seed\nimg,0.03,+proba,0.5,0.75,10,38.13080361,0,9\n");
}

TEST(CorpusTest, SyntheticImagesAreDeterministicAndDistinct) {
  for (CorpusKind k : {CorpusKind::kGradients, CorpusKind::kTextures,
                       CorpusKind::kShapes, CorpusKind::kMixed}) {
    EXPECT_EQ(ParseCorpusKind(CorpusKindName(k)), k);
    const Image a = SyntheticImage(k, 32, 16, 1, 0);
    EXPECT_EQ(a, SyntheticImage(k, 32, 16, 1, 0));
    EXPECT_NE(a, SyntheticImage(k, 32, 16, 1, 1));
    EXPECT_EQ(a.width, 32u);
    EXPECT_EQ(a.height, 16u);
  }
}

TEST(CorpusTest, GenerateLoadAndValidate) {
  const std::filesystem::path dir = TempDir("corpus_gen");
  CorpusSpec spec;
  spec.train_count = 4;
  spec.test_count = 2;
  spec.width = spec.height = 16;
  const CorpusManifest m = GenerateCorpus(dir, spec);
  EXPECT_EQ(m.WithRole(Role::kTrain).size(), 4u);
  EXPECT_EQ(m.WithRole(Role::kTest).size(), 2u);
  const CorpusManifest loaded = CorpusManifest::Load(dir / "manifest.txt");
  EXPECT_EQ(loaded.entries().size(), 6u);
  EXPECT_EQ(loaded.ContentHash(), m.ContentHash());
  EXPECT_NO_THROW(loaded.Validate());
  const std::vector<Tensor> test = LoadRole(loaded, Role::kTest);
  ASSERT_EQ(test.size(), 2u);
  EXPECT_EQ(test[0].shape(), (Shape{1, 3, 16, 16}));
  EXPECT_EQ(GenerateCorpus(TempDir("corpus_gen2"), spec).ContentHash(),
            m.ContentHash());
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(TempDir("corpus_gen2"));
}

TEST(CorpusTest, OverlappingRolesAreRejected) {
  const std::filesystem::path dir = TempDir("corpus_overlap");
  const Image img = SyntheticImage(CorpusKind::kShapes, 8, 8, 1, 0);
  WriteImage(dir / "a.png", img);
  WriteImage(dir / "b.png", img);
  WriteImage(dir / "c.png", SyntheticImage(CorpusKind::kShapes, 8, 8, 1, 1));
  EXPECT_THROW(CorpusManifest(dir, {{"a", "a.png", Role::kTrain},
                                    {"a2", "a.png", Role::kTest}})
                   .Validate(),
               InvalidInputError);
  EXPECT_THROW(CorpusManifest(dir, {{"a", "a.png", Role::kTrain},
                                    {"b", "b.png", Role::kTest}})
                   .Validate(),
               InvalidInputError);
  EXPECT_THROW(CorpusManifest(dir, {{"a", "a.png", Role::kTrain},
                                    {"a", "c.png", Role::kTest}})
                   .Validate(),
               InvalidInputError);
  EXPECT_NO_THROW(CorpusManifest(dir, {{"a", "a.png", Role::kTrain},
                                       {"c", "c.png", Role::kTest}})
                      .Validate());
  std::filesystem::remove_all(dir);
}

TEST(CorpusTest, FromFolderSplitsSortedNames) {
  const std::filesystem::path dir = TempDir("corpus_folder");
  for (int i = 0; i < 4; ++i) {
    WriteImage(dir / ("img" + std::to_string(3 - i) + ".png"),
               SyntheticImage(CorpusKind::kTextures, 8, 8, 1, i));
  }
  std::ofstream(dir / "notes.txt") << "ignored";
  const CorpusManifest m = CorpusManifest::FromFolder(dir, 1);
  ASSERT_EQ(m.entries().size(), 4u);
  EXPECT_EQ(m.entries()[0].id, "img0");
  EXPECT_EQ(m.WithRole(Role::kTest).at(0).id, "img3");
  m.Save(dir / "m.txt");
  EXPECT_EQ(CorpusManifest::Load(dir / "m.txt").ContentHash(), m.ContentHash());
  std::filesystem::remove_all(dir);
}

TEST(CorpusTest, MalformedManifest) {
  const std::filesystem::path dir = TempDir("corpus_bad");
  EXPECT_THROW(CorpusManifest::Load(dir / "none.txt"), IoError);
  std::ofstream(dir / "m.txt") << "# comment\nvalidate x.png\n";
  EXPECT_THROW(CorpusManifest::Load(dir / "m.txt"), InvalidInputError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace lic
