/* Copyright 2026 The Whatif Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "whatif/cli.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "whatif/format.h"
#include "whatif/report.h"
#include "whatif/simengine.h"

namespace whatif {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;
using ::testing::Not;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun RunWhatif(std::vector<std::string> args) {
  args.insert(args.begin(), "whatif");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }
  std::string Read(const std::string& name) const {
    absl::StatusOr<std::string> text = ReadFile(Path(name));
    EXPECT_TRUE(text.ok()) << text.status();
    return text.ok() ? *text : "";
  }
  size_t CountFiles(const std::string& ext) const {
    size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir_)) {
      if (e.path().extension() == ext) ++n;
    }
    return n;
  }
  fs::path dir_;
};

TEST_F(CliTest, SynthWritesParsableTrace) {
  CliRun r = RunWhatif({"synth", "--model", "vgg16", "--t-batch", "0.2", "--t-back",
                  "0.12", "-o", Path("vgg16.trace")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  absl::StatusOr<ModelTrace> trace = ParseTrace(Read("vgg16.trace"));
  ASSERT_TRUE(trace.ok()) << trace.status();
  EXPECT_EQ(trace->total_bytes(), 527'000'000u);
  EXPECT_EQ(trace->t_back(), 0.12);
  EXPECT_EQ(trace->t_batch(), 0.2);
}

TEST_F(CliTest, UnknownModelIsUsageError) {
  CliRun r = RunWhatif({"synth", "--model", "alexnet", "-o", Path("x.trace")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, UnwritableOutputIsIoErrorWithPath) {
  const std::string bad = Path("missing_dir/out.trace");
  CliRun r = RunWhatif({"synth", "--model", "resnet50", "-o", bad});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_THAT(r.err, HasSubstr(bad));
}

TEST_F(CliTest, BadTimingsAreValidationErrors) {
  CliRun r = RunWhatif({"synth", "--model", "resnet101", "--t-batch", "0.1",
                  "--t-back", "0", "-o", Path("x.trace")});
  EXPECT_EQ(r.code, kExitValidation);
}

TEST_F(CliTest, SingleWorkerPrintsPerfectScaling) {
  CliRun r = RunWhatif({"simulate", "--model", "resnet50", "-n", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("f_sim = 1.000"));
}

TEST_F(CliTest, SimulateMatchesLibraryBitForBit) {
  ASSERT_EQ(RunWhatif({"synth", "--model", "resnet50", "-o", Path("r50.trace")}).code,
            kExitOk);
  CliRun r = RunWhatif({"simulate", "--trace", Path("r50.trace"), "-n", "16",
                  "--bandwidth-gbps", "100"});
  ASSERT_EQ(r.code, kExitOk) << r.err;

  ModelTrace trace = *ParseTrace(Read("r50.trace"));
  SimConfig config;
  config.cluster = {16, 100e9};
  SimResult lib = *Simulate(trace, config);

  const std::string key = "\nf_sim: ";
  const size_t pos = r.out.find(key);
  ASSERT_NE(pos, std::string::npos) << r.out;
  const size_t start = pos + key.size();
  const std::string value = r.out.substr(start, r.out.find('\n', start) - start);
  std::optional<double> printed = ParseDouble(value);
  ASSERT_TRUE(printed.has_value()) << value;
  EXPECT_EQ(*printed, lib.f_sim);
}

TEST_F(CliTest, MissingTraceDiffersFromMalformedTrace) {
  CliRun missing = RunWhatif({"simulate", "--trace", Path("nope.trace")});
  EXPECT_EQ(missing.code, kExitIo);
  ASSERT_TRUE(WriteFile(Path("bad.trace"), "{\"name\":\"x\"}\n").ok());
  CliRun malformed = RunWhatif({"simulate", "--trace", Path("bad.trace")});
  EXPECT_EQ(malformed.code, kExitValidation);
  EXPECT_NE(missing.code, malformed.code);
}

TEST_F(CliTest, SimulateNeedsExactlyOneWorkload) {
  EXPECT_EQ(RunWhatif({"simulate"}).code, kExitUsage);
  ASSERT_EQ(RunWhatif({"synth", "--model", "vgg16", "-o", Path("v.trace")}).code,
            kExitOk);
  EXPECT_EQ(
      RunWhatif({"simulate", "--model", "vgg16", "--trace", Path("v.trace")}).code,
      kExitUsage);
}

TEST_F(CliTest, FlushLogIsWritten) {
  CliRun r = RunWhatif({"simulate", "--model", "vgg16", "-n", "16",
                  "--bandwidth-gbps", "10", "--flush-log", Path("log.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(Read("log.csv"), HasSubstr("flush_time_s,start_s,end_s,bytes"));
}

TEST_F(CliTest, BandwidthSweepOnAllModels) {
  CliRun r = RunWhatif({"sweep", "--bandwidths-gbps", "1,10,25,40,100", "--workers",
                  "16", "--out-dir", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string body = CsvBody(Read("sweep.csv"));
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 16);  // header + 15
  EXPECT_EQ(CountFiles(".svg"), 1u);
  EXPECT_THAT(Read("sweep.csv"), HasSubstr("# config_digest: "));
}

TEST_F(CliTest, CompressionSweepAtTwoBandwidthsGivesTwoPlots) {
  CliRun r = RunWhatif({"sweep", "--bandwidths-gbps", "10,100", "--ratios",
                  "1,2,3,4,5,10,20,50,100", "--axis", "ratio", "--out-dir",
                  dir_.string(), "--name", "compression"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(CountFiles(".svg"), 2u);
  EXPECT_TRUE(fs::exists(Path("compression_bw10g.svg")));
  EXPECT_TRUE(fs::exists(Path("compression_bw100g.svg")));
}

TEST_F(CliTest, EmptyBandwidthListIsValidationError) {
  CliRun r = RunWhatif({"sweep", "--bandwidths-gbps", "", "--out-dir", dir_.string()});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_THAT(r.err, HasSubstr("bandwidth"));
}

TEST_F(CliTest, SweepIsByteDeterministic) {
  const std::vector<std::string> args = {
      "sweep", "--model", "resnet101", "--model", "vgg16", "--bandwidths-gbps",
      "10,100", "--workers", "16,32", "--ratios", "1,5", "--out-dir"};
  std::vector<std::string> a = args, b = args;
  a.insert(a.end(), {Path("a"), "--threads", "4"});
  b.insert(b.end(), {Path("b"), "--threads", "1"});
  ASSERT_EQ(RunWhatif(a).code, kExitOk);
  ASSERT_EQ(RunWhatif(b).code, kExitOk);
  EXPECT_EQ(CsvBody(Read("a/sweep.csv")), CsvBody(Read("b/sweep.csv")));
  size_t svgs = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "a")) {
    if (e.path().extension() != ".svg") continue;
    ++svgs;
    EXPECT_EQ(Read("a/" + e.path().filename().string()),
              Read("b/" + e.path().filename().string()));
  }
  EXPECT_GT(svgs, 0u);
}

TEST_F(CliTest, SweepConfigFile) {
  ASSERT_TRUE(WriteFile(Path("cfg.jsonl"),
                        "{\"name\":\"cfg\",\"bandwidths_gbps\":[10,100],"
                        "\"workers\":[16],\"models\":[\"resnet50\"]}\n"
                        "{\"model\":\"vgg16\",\"t_batch_s\":0.2,"
                        "\"t_back_s\":0.12}\n")
                  .ok());
  CliRun r = RunWhatif({"sweep", "--config", Path("cfg.jsonl"), "--out-dir",
                  dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string body = CsvBody(Read("cfg.csv"));
  EXPECT_THAT(body, HasSubstr("resnet50,16,10000000000,"));
  EXPECT_THAT(body, HasSubstr("vgg16,16,100000000000,"));
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 5);
}

TEST_F(CliTest, FlagsOverrideSweepConfig) {
  ASSERT_TRUE(WriteFile(Path("cfg.jsonl"),
                        "{\"name\":\"cfg\",\"bandwidths_gbps\":[10,100],"
                        "\"workers\":[16],\"models\":[\"resnet50\"]}\n")
                  .ok());
  CliRun r = RunWhatif({"sweep", "--config", Path("cfg.jsonl"), "--workers",
                        "8,64", "--out-dir", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string body = CsvBody(Read("cfg.csv"));
  EXPECT_THAT(body, HasSubstr("resnet50,8,10000000000,"));
  EXPECT_THAT(body, HasSubstr("resnet50,64,100000000000,"));
  EXPECT_THAT(body, Not(HasSubstr("resnet50,16,")));
}

TEST_F(CliTest, BadSweepConfigIsValidationError) {
  ASSERT_TRUE(WriteFile(Path("cfg.jsonl"), "{\"bogus\":1}\n").ok());
  CliRun r = RunWhatif({"sweep", "--config", Path("cfg.jsonl"), "--out-dir",
                  dir_.string()});
  EXPECT_EQ(r.code, kExitValidation);
}

TEST_F(CliTest, CompressRatioReportsGridPoint) {
  CliRun r = RunWhatif({"compress-ratio", "--model", "vgg16"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_FALSE(r.out.empty());
}

TEST_F(CliTest, ReferenceMatchesBundledData) {
  CliRun r = RunWhatif({"reference"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, SerializeReferenceCsv(LoadReferenceData()));
  EXPECT_THAT(r.out, HasSubstr("vgg16,2,100000000000,0.5599"));
}

TEST_F(CliTest, HelpAndUsage) {
  EXPECT_EQ(RunWhatif({"--help"}).code, kExitOk);
  EXPECT_EQ(RunWhatif({}).code, kExitUsage);
  EXPECT_EQ(RunWhatif({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(RunWhatif({"simulate", "--model", "vgg16", "-n", "many"}).code,
            kExitUsage);
}

TEST(ExitCodeForTest, Mapping) {
  EXPECT_EQ(ExitCodeFor(absl::OkStatus()), kExitOk);
  EXPECT_EQ(ExitCodeFor(absl::NotFoundError("x")), kExitIo);
  EXPECT_EQ(ExitCodeFor(absl::PermissionDeniedError("x")), kExitIo);
  EXPECT_EQ(ExitCodeFor(absl::InvalidArgumentError("x")), kExitValidation);
}

int RunBinary(const std::string& args) {
  const std::string cmd =
      std::string(WHATIF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliBinaryTest, ExitCodes) {
  EXPECT_EQ(RunBinary("simulate --model resnet50 -n 1"), 0);
  EXPECT_EQ(RunBinary("simulate --model bogus"), 2);
  EXPECT_EQ(RunBinary("simulate --model vgg16 --ratio 0.5"), 3);
  EXPECT_EQ(RunBinary("simulate --trace /nonexistent/x.trace"), 4);
}

}  // namespace
}  // namespace whatif
