// Copyright 2026 The subtok Authors
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

// Runs the built `subtok` binary end to end.

#include <sys/wait.h>

#include <cstdio>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

#ifndef SUBTOK_CLI
#error "SUBTOK_CLI must name the subtok binary"
#endif

namespace subtok {
namespace {

using ::testing::HasSubstr;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr, interleaved.
};

RunResult RunCli(const std::string& args) {
  const std::string command = std::string(SUBTOK_CLI) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  size_t n;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.output.append(buffer, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string Quote(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::WriteFile(dir_ / "data.tsv", testing::ToTsv(testing::SeparableToy(40, 2)));
  }
  std::string Data() const { return Quote(dir_ / "data.tsv"); }
  testing::TempDir dir_;
};

TEST_F(CliTest, TrainBpeWritesHeaderAndMerges) {
  RunResult r = RunCli("train-bpe --data " + Data() + " --num-merges 1 --out " +
                    Quote(dir_ / "m1.txt"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_EQ(testing::ReadFile(dir_ / "m1.txt").substr(0, 17), "#bpe v1 merges=1\n");
  r = RunCli("train-bpe --data " + Data() + " --num-merges 0 --out " + Quote(dir_ / "m0.txt"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_EQ(testing::ReadFile(dir_ / "m0.txt"), "#bpe v1 merges=0\n");
}

TEST_F(CliTest, UnreadableCorpusFails) {
  const RunResult r = RunCli("train-bpe --data /nonexistent/corpus.txt --out " +
                          Quote(dir_ / "m.txt"));
  EXPECT_NE(r.exit_code, 0);
  EXPECT_THAT(r.output, HasSubstr("error:"));
  EXPECT_THAT(r.output, HasSubstr("/nonexistent/corpus.txt"));
}

TEST_F(CliTest, EncodeEmptyInput) {
  testing::WriteFile(dir_ / "empty.txt", "");
  const RunResult r = RunCli("encode --data " + Quote(dir_ / "empty.txt") + " --out " +
                          Quote(dir_ / "out.txt"));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_EQ(testing::ReadFile(dir_ / "out.txt"), "");
}

TEST_F(CliTest, EncodeWithMissingVocabFails) {
  testing::WriteFile(dir_ / "in.txt", "abc\n");
  const RunResult r = RunCli("encode --strategy wordpiece --data " + Quote(dir_ / "in.txt") +
                          " --out " + Quote(dir_ / "out.txt"));
  EXPECT_NE(r.exit_code, 0);
  EXPECT_THAT(r.output, HasSubstr("vocab"));
}

TEST_F(CliTest, TrainThenPredict) {
  RunResult r = RunCli("train --data " + Data() + " --dim 10 --epochs 5 --out " +
                    Quote(dir_ / "model.bin"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  testing::WriteFile(dir_ / "in.txt", "rude1 rude2\n");
  r = RunCli("predict --model " + Quote(dir_ / "model.bin") + " --data " + Quote(dir_ / "in.txt"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_THAT(r.output, HasSubstr("attack\t"));
}

TEST_F(CliTest, CvWithConfigFileAndOverrides) {
  testing::WriteFile(dir_ / "config.json", R"({"k": 4, "dim": 8, "epochs": 2})");
  const RunResult r = RunCli("cv --config " + Quote(dir_ / "config.json") + " --data " + Data() +
                          " --k 2 --report-json " + Quote(dir_ / "report.json"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_THAT(r.output, HasSubstr("== summary =="));
  const auto json = nlohmann::json::parse(testing::ReadFile(dir_ / "report.json"));
  EXPECT_EQ(json["config"]["k"], 2);
  EXPECT_EQ(json["config"]["dim"], 8);
  EXPECT_EQ(json["splits"].size(), 2u);
}

TEST_F(CliTest, CvRejectsTooManyFolds) {
  const RunResult r = RunCli("cv --data " + Data() + " --k 500");
  EXPECT_NE(r.exit_code, 0);
  EXPECT_THAT(r.output, HasSubstr("--k=500"));
}

TEST_F(CliTest, UnknownFlagFails) {
  EXPECT_NE(RunCli("train --bogus 1").exit_code, 0);
  EXPECT_NE(RunCli("").exit_code, 0);
}

}  // namespace
}  // namespace subtok
