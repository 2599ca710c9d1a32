// Copyright 2026 The TypoStrike Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "typostrike/cli.h"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"
#include "typostrike/attack.h"
#include "typostrike/naive_bayes.h"
#include "typostrike/remote.h"
#include "typostrike/word_scoring.h"

namespace typostrike {
namespace {

namespace fs = std::filesystem;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  Result r;
  r.code = RunCli(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("typostrike_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    train_ = testing::SyntheticReviews(300, 11);
    test_ = testing::SyntheticReviews(40, 12);
    std::ofstream(Path("train.jsonl")) << train_.ToJsonl();
    std::ofstream(Path("test.jsonl")) << test_.ToJsonl();
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  fs::path dir_;
  LabeledCorpus train_;
  LabeledCorpus test_;
};

TEST(ParseIntGridTest, ExpandsRanges) {
  EXPECT_THAT(*ParseIntGrid({"1-4", "10"}), ElementsAre(1, 2, 3, 4, 10));
  EXPECT_THAT(*ParseIntGrid({"3"}), ElementsAre(3));
  EXPECT_THAT(*ParseIntGrid({" 2 - 3 "}), ElementsAre(2, 3));
  EXPECT_FALSE(ParseIntGrid({"0"}).ok());
  EXPECT_FALSE(ParseIntGrid({"4-1"}).ok());
  EXPECT_FALSE(ParseIntGrid({"x"}).ok());
  EXPECT_FALSE(ParseIntGrid({"1-"}).ok());
  EXPECT_FALSE(ParseIntGrid({"-3"}).ok());
}

TEST(RunCliTest, UsageAndVersion) {
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"bogus"}).code, kExitUsage);
  const Result help = Invoke({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_THAT(help.out, HasSubstr("evaluate"));
  const Result version = Invoke({"--version"});
  EXPECT_EQ(version.code, kExitOk);
  EXPECT_THAT(version.out, HasSubstr("typostrike 0.1.0"));
  EXPECT_EQ(Invoke({"score"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"score", "--help"}).code, kExitOk);
}

TEST_F(CliTest, ScoreMatchesLibrary) {
  const Result r = Invoke({"score", "--corpus", Path("train.jsonl"),
                        "--min-freq", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out,
            BuildScoreTable(train_, StopWordSet::English(), 2)->ToJson());
  ASSERT_EQ(Invoke({"score", "--corpus", Path("train.jsonl"), "-o",
                 Path("scores.json")})
                .code,
            kExitOk);
  EXPECT_TRUE(WordScoreTable::Load(Path("scores.json")).ok());
}

TEST_F(CliTest, ScoreErrors) {
  EXPECT_EQ(Invoke({"score", "--corpus", Path("train.jsonl"), "--min-freq", "0"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"score", "--corpus", Path("train.jsonl"), "--min-freq", "x"})
                .code,
            kExitUsage);
  const Result missing = Invoke({"score", "--corpus", Path("nope.jsonl")});
  EXPECT_EQ(missing.code, kExitFailure);
  EXPECT_THAT(missing.err, HasSubstr("error:"));
  EXPECT_EQ(Invoke({"score", "--corpus", Path("train.jsonl"), "--stopwords",
                 Path("missing.txt")})
                .code,
            kExitFailure);
}

TEST_F(CliTest, TrainAttackPipeline) {
  ASSERT_EQ(Invoke({"train-nb", "--corpus", Path("train.jsonl"), "-o",
                 Path("nb.json")})
                .code,
            kExitOk);
  ASSERT_EQ(Invoke({"score", "--corpus", Path("train.jsonl"), "-o",
                 Path("scores.json")})
                .code,
            kExitOk);
  std::string input;
  for (size_t i = 0; i < 5; ++i) input += test_.samples()[i].text + "\n";
  const Result r =
      Invoke({"attack", "--input", "-", "--scores", Path("scores.json"),
           "--victim-local", Path("nb.json"), "--max-tokens", "5",
           "--max-tries", "2", "--seed", "3"},
          input);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::vector<std::string> lines = Lines(r.out);
  ASSERT_EQ(lines.size(), 5);
  for (const std::string& line : lines) {
    const AttackOutcome o = nlohmann::json::parse(line).get<AttackOutcome>();
    EXPECT_LE(o.queries_used, 10);
    EXPECT_EQ(*ReplayOutcome(o), o.final_text);
  }

  // Same seed, same bytes, whatever the thread count.
  const Result again =
      Invoke({"attack", "--input", "-", "--scores", Path("scores.json"),
           "--victim-local", Path("nb.json"), "--max-tokens", "5",
           "--max-tries", "2", "--seed", "3", "--jobs", "3"},
          input);
  EXPECT_EQ(again.out, r.out);

  // Attack outcomes can be fed back in.
  const Result chained =
      Invoke({"attack", "--input", "-", "--corpus", Path("train.jsonl"),
           "--mode", "forgetful"},
          r.out);
  ASSERT_EQ(chained.code, kExitOk) << chained.err;
  EXPECT_EQ(Lines(chained.out).size(), 5);
}

TEST_F(CliTest, AttackModesAndKinds) {
  const Result ex = Invoke({"attack", "--text", "a superb film", "--corpus",
                         Path("train.jsonl"), "--mode", "exhaustive"});
  ASSERT_EQ(ex.code, kExitOk) << ex.err;
  EXPECT_EQ(nlohmann::json::parse(ex.out)["mode"], "exhaustive");
  EXPECT_EQ(Invoke({"attack", "--text", "x", "--corpus", Path("train.jsonl"),
                 "--kinds", "teleport"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"attack", "--text", "x", "--corpus", Path("train.jsonl"),
                 "--mode", "greedy"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"attack", "--text", "x"}).code, kExitFailure);
  EXPECT_EQ(Invoke({"attack", "--text", "x", "--corpus", Path("train.jsonl"),
                 "--max-tokens", "0"})
                .code,
            kExitUsage);
}

TEST_F(CliTest, VictimUrlFromEnvironment) {
  // Port 1 is never a victim; the env var must be honored and fail.
  ::setenv("TYPOSTRIKE_VICTIM_URL", "http://127.0.0.1:1", 1);
  const Result r = Invoke({"attack", "--text", "superb", "--corpus",
                        Path("train.jsonl")});
  // An explicit local victim wins over the environment.
  const Result local = Invoke({"train-nb", "--corpus", Path("train.jsonl"), "-o",
                            Path("nb.json")});
  const Result explicit_local =
      Invoke({"attack", "--text", "superb", "--corpus", Path("train.jsonl"),
           "--victim-local", Path("nb.json")});
  ::unsetenv("TYPOSTRIKE_VICTIM_URL");
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_EQ(local.code, kExitOk);
  EXPECT_EQ(explicit_local.code, kExitOk) << explicit_local.err;
}

TEST_F(CliTest, EvaluateWritesReports) {
  const Result r =
      Invoke({"evaluate", "--train", Path("train.jsonl"), "--test",
           Path("test.jsonl"), "--max-tokens", "1-2,5", "--max-tries", "2",
           "--mode", "normal,forgetful", "--sample-size", "20", "--out-dir",
           Path("out")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("# Attack report"));
  EXPECT_EQ(Slurp(Path("out/report.md")), r.out);
  const std::vector<std::string> csv = Lines(Slurp(Path("out/report.csv")));
  ASSERT_EQ(csv.size(), 7);
  EXPECT_THAT(csv[1], ::testing::StartsWith("normal,1,2,"));
  EXPECT_THAT(csv[6], ::testing::StartsWith("forgetful,5,2,"));
  EXPECT_TRUE(fs::exists(Path("out/run_meta.json")));
}

TEST_F(CliTest, EvaluateConfigFile) {
  std::ofstream(Path("run.toml"))
      << "[evaluate]\n"
      << "train = \"" << Path("train.jsonl") << "\"\n"
      << "test = \"" << Path("test.jsonl") << "\"\n"
      << "max-tokens = [\"1\", \"3\"]\n"
      << "max-tries = [\"2\"]\n"
      << "sample-size = 10\n"
      << "out-dir = \"" << Path("cfg") << "\"\n";
  const Result r = Invoke({"evaluate", "--config", Path("run.toml")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Lines(Slurp(Path("cfg/report.csv"))).size(), 3);

  // Flags beat the file.
  const Result over = Invoke({"evaluate", "--config", Path("run.toml"),
                           "--max-tries", "1,4", "--out-dir", Path("cfg2")});
  ASSERT_EQ(over.code, kExitOk) << over.err;
  EXPECT_EQ(Lines(Slurp(Path("cfg2/report.csv"))).size(), 5);

  EXPECT_EQ(Invoke({"evaluate", "--config", Path("missing.toml")}).code,
            kExitUsage);
}

TEST_F(CliTest, EvaluateErrors) {
  EXPECT_EQ(Invoke({"evaluate", "--test", Path("test.jsonl")}).code, kExitUsage);
  EXPECT_EQ(Invoke({"evaluate", "--test", Path("test.jsonl"), "--out-dir",
                 Path("o"), "--max-tries", "0"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"evaluate", "--test", Path("test.jsonl"), "--out-dir",
                 Path("o")})
                .code,
            kExitFailure);
}

TEST_F(CliTest, PerturbDataset) {
  const std::string input = "My hovercraft is full of eels\nA second line\n";
  const std::string vocab = TYPOSTRIKE_DATA_DIR "/toy_vocab.txt";
  const Result r = Invoke({"perturb-dataset", "--input", "-", "--vocab", vocab,
                        "--probability", "1", "--edits", "2", "--seed", "4"},
                       input);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::vector<std::string> lines = Lines(r.out);
  ASSERT_EQ(lines.size(), 2);
  for (const std::string& line : lines) {
    const nlohmann::json j = nlohmann::json::parse(line);
    EXPECT_FALSE(j["perturbations"].empty());
  }
  const Result threaded =
      Invoke({"perturb-dataset", "--input", "-", "--vocab", vocab,
           "--probability", "1", "--edits", "2", "--seed", "4", "--jobs", "2"},
          input);
  EXPECT_EQ(threaded.out, r.out);
  EXPECT_EQ(Invoke({"perturb-dataset", "--input", "-", "--vocab", vocab,
                 "--probability", "2"},
                input)
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"perturb-dataset", "--input", "-", "--vocab",
                 Path("missing.txt")},
                input)
                .code,
            kExitFailure);
}

TEST_F(CliTest, ServeRejectsBadBind) {
  EXPECT_EQ(Invoke({"serve", "--corpus", Path("train.jsonl"), "--bind",
                 "nonsense"})
                .code,
            kExitFailure);
  EXPECT_EQ(Invoke({"serve"}).code, kExitFailure);
}

// Runs the real binary: `serve` answers like the local model and shuts down
// cleanly on SIGTERM.
TEST_F(CliTest, ServeBinaryEndToEnd) {
  int err_pipe[2];
  ASSERT_EQ(::pipe(err_pipe), 0);
  const std::string corpus = Path("train.jsonl");
  const pid_t pid = ::fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    ::dup2(err_pipe[1], STDERR_FILENO);
    ::close(err_pipe[0]);
    ::execl(TYPOSTRIKE_BINARY, "typostrike", "serve", "--corpus",
            corpus.c_str(), "--bind", "127.0.0.1:0", nullptr);
    ::_exit(127);
  }
  ::close(err_pipe[1]);
  std::string banner;
  char c;
  while (::read(err_pipe[0], &c, 1) == 1 && c != '\n') banner += c;
  ASSERT_THAT(banner, HasSubstr("listening on 127.0.0.1:"));
  const std::string port = banner.substr(banner.rfind(':') + 1);

  absl::StatusOr<std::unique_ptr<RemoteClassifier>> remote =
      RemoteClassifier::Connect("http://127.0.0.1:" + port);
  ASSERT_TRUE(remote.ok()) << remote.status();
  const NaiveBayesModel local = *NaiveBayesModel::Train(train_);
  for (size_t i = 0; i < 10; ++i) {
    const std::string& text = test_.samples()[i].text;
    const ClassDistribution a = *(*remote)->PredictOne(text);
    const ClassDistribution b = *local.PredictOne(text);
    EXPECT_NEAR(a.probs[0], b.probs[0], 1e-6);
  }

  ASSERT_EQ(::kill(pid, SIGTERM), 0);
  int status = 0;
  ASSERT_EQ(::waitpid(pid, &status, 0), pid);
  ::close(err_pipe[0]);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}

TEST(BinaryTest, ExitCodes) {
  auto code = [](const std::string& args) {
    const int status = std::system(
        (std::string(TYPOSTRIKE_BINARY) + " " + args + " >/dev/null 2>&1")
            .c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  EXPECT_EQ(code("--version"), 0);
  EXPECT_EQ(code(""), 2);
  EXPECT_EQ(code("score --corpus /nonexistent.jsonl"), 1);
}

}  // namespace
}  // namespace typostrike
