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

// Drives the lic binary as a subprocess.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "lic/corpus.h"
#include "lic/eval.h"
#include "lic/image.h"
#include "lic/network.h"
#include "test_util.h"

namespace lic {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult RunCli(const std::string& args) {
  const std::string cmd = std::string(LIC_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Parses the "key=value key=value" line printed by compress and train.
std::map<std::string, std::string> KeyValues(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const size_t eq = tok.find('=');
    if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

std::vector<uint8_t> ReadBytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(testing::TempDir("cli"));
    ASSERT_EQ(RunCli("gen-corpus -o " + (*dir_ / "c").string() +
                  " --train 4 --test 2 --width 16 --height 16")
                  .exit_code,
              0);
    const RunResult r = RunCli("train --manifest " + Manifest() + " -o " +
                            Model() + " --steps 4 --batch 2 --crop 16");
    ASSERT_EQ(r.exit_code, 0) << r.out;
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }

  static std::string Manifest() { return (*dir_ / "c/manifest.txt").string(); }
  static std::string Model() { return (*dir_ / "m.lic").string(); }
  static std::string TestImage() {
    return (*dir_ / "c/mixed_test_000.png").string();
  }
  static std::string Path(const std::string& name) {
    return (*dir_ / name).string();
  }

  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

TEST_F(CliTest, UsageErrorsExitWithTwo) {
  EXPECT_EQ(RunCli("").exit_code, 2);
  EXPECT_EQ(RunCli("train --manifest " + Manifest() + " -o " + Path("x.lic") +
                " --mode frozen")
                .exit_code,
            2);
  EXPECT_EQ(RunCli("train --manifest " + Manifest() + " -o " + Path("x.lic") +
                " --mode proba-only")
                .exit_code,
            2);
  EXPECT_EQ(RunCli("compress " + TestImage() + " -m " + Model() + " -o " +
                Path("x") + " --steps -1")
                .exit_code,
            2);
  EXPECT_EQ(RunCli("eval --manifest " + Manifest() + " --model " + Model() +
                " --strategy bogus")
                .exit_code,
            2);
}

TEST_F(CliTest, RuntimeFailuresExitWithOne) {
  std::ofstream(Path("junk.png")) << "junk";
  EXPECT_EQ(RunCli("compress " + Path("junk.png") + " -m " + Model() + " -o " +
                Path("j.lprs"))
                .exit_code,
            1);
  EXPECT_EQ(RunCli("decompress " + Path("junk.png") + " -m " + Model() + " -o " +
                Path("j.png"))
                .exit_code,
            1);
}

TEST_F(CliTest, CompressDecompressRoundTrip) {
  const RunResult c = RunCli("compress " + TestImage() + " -m " + Model() +
                          " -o " + Path("a.lprs"));
  ASSERT_EQ(c.exit_code, 0) << c.out;
  auto kv = KeyValues(c.out);
  EXPECT_EQ(std::stoul(kv["bytes"]), fs::file_size(Path("a.lprs")));
  EXPECT_EQ(kv["refine_steps"], "0");
  ASSERT_EQ(RunCli("decompress " + Path("a.lprs") + " -m " + Model() + " -o " +
                Path("a.png"))
                .exit_code,
            0);
  ASSERT_EQ(RunCli("decompress " + Path("a.lprs") + " -m " + Model() + " -o " +
                Path("b.png"))
                .exit_code,
            0);
  EXPECT_EQ(ReadBytes(Path("a.png")), ReadBytes(Path("b.png")));
  const Image original = ReadImage(TestImage());
  const Image decoded = ReadImage(Path("a.png"));
  EXPECT_EQ(decoded.width, original.width);
  EXPECT_EQ(decoded.height, original.height);
  EXPECT_NEAR(PsnrDb(Mse255(original, decoded)), std::stod(kv["psnr_db"]),
              1e-6);
}

TEST_F(CliTest, RefinementDisabledMatchesBaseline) {
  ASSERT_EQ(RunCli("compress " + TestImage() + " -m " + Model() + " -o " +
                Path("base.lprs"))
                .exit_code,
            0);
  ASSERT_EQ(RunCli("compress " + TestImage() + " -m " + Model() + " -o " +
                Path("zero.lprs") + " --refine --steps 0")
                .exit_code,
            0);
  EXPECT_EQ(ReadBytes(Path("base.lprs")), ReadBytes(Path("zero.lprs")));
  const RunResult r = RunCli("compress " + TestImage() + " -m " + Model() +
                          " -o " + Path("ref.lprs") + " --refine --steps 30" +
                          " --trace " + Path("trace.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(KeyValues(r.out)["refine_steps"], "30");
  std::ifstream trace(Path("trace.csv"));
  std::string header;
  std::getline(trace, header);
  EXPECT_EQ(header, "step,relaxed_loss,true_loss,true_rate_bits,true_mse,seed");
}

TEST_F(CliTest, ProbaOnlyKeepsTransforms) {
  const RunResult r = RunCli("train --manifest " + Manifest() +
                          " --mode proba-only --base " + Model() + " -o " +
                          Path("p.lic") + " --steps 3 --batch 2 --crop 16");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const ModelParams base = LoadModel(Model());
  const ModelParams tuned = LoadModel(Path("p.lic"));
  EXPECT_EQ(tuned.encoder, base.encoder);
  EXPECT_EQ(tuned.decoder, base.decoder);
  EXPECT_NE(tuned.prior.loc, base.prior.loc);
  EXPECT_TRUE(fs::exists(Path("p.lic.log.csv")));
}

TEST_F(CliTest, EvalWritesRows) {
  const RunResult r =
      RunCli("eval --manifest " + Manifest() + " --model " + Model() +
          " --strategy baseline,+adapt --steps 5 -o " + Path("rd.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.out;
  std::ifstream in(Path("rd.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1 + 2 * 2 + 2);
}

}  // namespace
}  // namespace lic
