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


#include "typostrike/experiment.h"

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"
#include "typostrike/naive_bayes.h"

namespace typostrike {
namespace {

namespace fs = std::filesystem;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("typostrike_exp_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

struct Fixture {
  LabeledCorpus train = testing::SyntheticReviews(300, 1);
  LabeledCorpus test = testing::SyntheticReviews(60, 2);
  NaiveBayesModel nb = *NaiveBayesModel::Train(train);
  WordScoreTable scores = *BuildScoreTable(train, StopWordSet::English(), 1);
};

TEST(SampleTestSetTest, KeepsOrderAndIsDeterministic) {
  const LabeledCorpus corpus = testing::SyntheticReviews(100, 3);
  const LabeledCorpus a = *SampleTestSet(corpus, 20, 5);
  const LabeledCorpus b = *SampleTestSet(corpus, 20, 5);
  ASSERT_EQ(a.size(), 20);
  EXPECT_EQ(a.samples(), b.samples());
  size_t cursor = 0;
  for (const Sample& s : a.samples()) {
    while (cursor < corpus.size() && !(corpus.samples()[cursor] == s)) {
      ++cursor;
    }
    ASSERT_LT(cursor, corpus.size()) << "sample out of order or foreign";
    ++cursor;
  }
  EXPECT_NE(SampleTestSet(corpus, 20, 6)->samples(), a.samples());
  EXPECT_EQ(SampleTestSet(corpus, 100, 5)->samples(), corpus.samples());
  EXPECT_FALSE(SampleTestSet(corpus, 101, 5).ok());
}

TEST(ExperimentConfigTest, Validate) {
  ExperimentConfig config;
  config.train_corpus = "train.jsonl";
  config.test_corpus = "test.jsonl";
  EXPECT_TRUE(config.Validate().ok());

  ExperimentConfig bad = config;
  bad.test_corpus.clear();
  EXPECT_FALSE(bad.Validate().ok());
  bad = config;
  bad.train_corpus.clear();
  EXPECT_FALSE(bad.Validate().ok());
  bad.scores = "s.json";
  bad.victim_url = "http://127.0.0.1:1";
  EXPECT_TRUE(bad.Validate().ok());
  bad = config;
  bad.max_tokens = {3, 0};
  EXPECT_FALSE(bad.Validate().ok());
  bad = config;
  bad.max_tries.clear();
  EXPECT_FALSE(bad.Validate().ok());
  bad.modes = {AttackMode::kExhaustive};
  EXPECT_TRUE(bad.Validate().ok());
  bad = config;
  bad.modes.clear();
  EXPECT_FALSE(bad.Validate().ok());
  bad = config;
  bad.kinds.clear();
  EXPECT_FALSE(bad.Validate().ok());
  bad = config;
  bad.sample_size = 0;
  EXPECT_FALSE(bad.Validate().ok());
  bad = config;
  bad.min_freq = 0;
  EXPECT_FALSE(bad.Validate().ok());
}

TEST(ExperimentConfigTest, HashIgnoresJobsAndOutput) {
  ExperimentConfig a;
  a.test_corpus = "t";
  ExperimentConfig b = a;
  b.jobs = 8;
  b.output_dir = "/elsewhere";
  EXPECT_EQ(a.Hash(), b.Hash());
  b.seed = a.seed + 1;
  EXPECT_NE(a.Hash(), b.Hash());
  b = a;
  b.max_tries = {1, 2};
  EXPECT_NE(a.Hash(), b.Hash());
}

TEST(CellResultTest, Metrics) {
  CellResult c;
  c.sampled = 10;
  c.correct = 8;
  c.flipped = 2;
  c.queries = 40;
  EXPECT_DOUBLE_EQ(c.orig_acc(), 0.8);
  EXPECT_DOUBLE_EQ(c.final_acc(), 0.6);
  EXPECT_DOUBLE_EQ(c.success_rate(), 0.25);
  EXPECT_DOUBLE_EQ(c.success_rate_all(), 0.2);
  EXPECT_DOUBLE_EQ(c.avg_queries(), 5.0);
  const CellResult empty;
  EXPECT_EQ(empty.success_rate(), 0.0);
  EXPECT_EQ(empty.avg_queries(), 0.0);
  const CellResult back = nlohmann::json(c).get<CellResult>();
  EXPECT_EQ(nlohmann::json(back), nlohmann::json(c));
}

TEST(ExpandGridTest, Order) {
  ExperimentConfig config;
  config.modes = {AttackMode::kForgetful, AttackMode::kExhaustive,
                  AttackMode::kNormal};
  config.max_tokens = {1, 5};
  config.max_tries = {2, 3};
  std::vector<std::string> got;
  for (const CellSpec& spec : ExpandGrid(config)) {
    got.push_back(std::string(ModeName(spec.mode)) + ":" +
                  std::to_string(spec.budget.max_tokens_to_perturb) + "x" +
                  std::to_string(spec.budget.max_tries_per_token));
  }
  EXPECT_THAT(got, ElementsAre("forgetful:1x2", "forgetful:1x3",
                               "forgetful:5x2", "forgetful:5x3",
                               "exhaustive:0x0", "normal:1x2", "normal:1x3",
                               "normal:5x2", "normal:5x3"));
  EXPECT_EQ(ExpandGrid(config)[4].kinds, ExhaustiveKinds());
}

TEST(SampleRngTest, DependsOnSeedAndIndexOnly) {
  EXPECT_EQ(SampleRng(1, 2)(), SampleRng(1, 2)());
  EXPECT_NE(SampleRng(1, 2)(), SampleRng(1, 3)());
  EXPECT_NE(SampleRng(1, 2)(), SampleRng(2, 2)());
  EXPECT_NE(SampleRng(1ull << 32, 0)(), SampleRng(0, 1)());
}

TEST(RunGridTest, AccountsQueriesAndAccuracy) {
  const Fixture f;
  ExperimentConfig config;
  config.max_tokens = {2, 10};
  config.max_tries = {1, 4};
  config.modes = {AttackMode::kNormal, AttackMode::kForgetful};
  absl::StatusOr<ExperimentReport> report =
      RunGrid(config, f.test, f.nb, f.scores, StopWordSet::English());
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_TRUE(report->failure.empty());
  EXPECT_EQ(report->cells.size(), 8);
  EXPECT_EQ(report->initial_queries, 60);

  int64_t correct = 0;
  for (const Sample& s : f.test.samples()) {
    correct += f.nb.PredictOne(Normalize(s.text))->predicted == s.label;
  }
  for (const CellResult& c : report->cells) {
    EXPECT_EQ(c.sampled, 60);
    EXPECT_EQ(c.correct, correct);
    EXPECT_LE(c.flipped, c.correct);
    EXPECT_LE(c.queries, c.correct * int64_t{c.max_tokens} * c.max_tries);
    EXPECT_GE(c.queries, c.flipped);
  }
}

TEST(RunGridTest, FinalAccuracyFallsWithBudget) {
  const Fixture f;
  ExperimentConfig config;
  config.max_tokens = {1, 2, 5, 10};
  config.max_tries = {1, 2, 4};
  absl::StatusOr<ExperimentReport> report =
      RunGrid(config, f.test, f.nb, f.scores, StopWordSet::English());
  ASSERT_TRUE(report.ok());
  for (const CellResult& a : report->cells) {
    for (const CellResult& b : report->cells) {
      if (a.max_tokens <= b.max_tokens && a.max_tries <= b.max_tries) {
        EXPECT_GE(a.final_acc(), b.final_acc())
            << a.max_tokens << "x" << a.max_tries << " vs " << b.max_tokens
            << "x" << b.max_tries;
      }
    }
  }
}

TEST(RunGridTest, IndependentOfJobs) {
  const Fixture f;
  ExperimentConfig config;
  config.max_tokens = {3};
  config.max_tries = {2};
  config.modes = {AttackMode::kNormal, AttackMode::kExhaustive};
  absl::StatusOr<ExperimentReport> one =
      RunGrid(config, f.test, f.nb, f.scores, StopWordSet::English());
  config.jobs = 4;
  absl::StatusOr<ExperimentReport> four =
      RunGrid(config, f.test, f.nb, f.scores, StopWordSet::English());
  ASSERT_TRUE(one.ok() && four.ok());
  EXPECT_EQ(RenderReport(*one, ReportFormat::kJson),
            RenderReport(*four, ReportFormat::kJson));
}

TEST(RunGridTest, OutcomesMatchCellCounts) {
  const Fixture f;
  std::vector<Sample> samples = f.test.samples();
  std::vector<std::string> texts;
  for (Sample& s : samples) {
    s.text = Normalize(s.text);
    texts.push_back(s.text);
  }
  const std::vector<ClassDistribution> initial = *f.nb.Predict(texts);
  CellInputs inputs;
  inputs.samples = &samples;
  inputs.initial = &initial;
  inputs.victim = &f.nb;
  inputs.scores = &f.scores;
  CellSpec spec;
  spec.budget = {5, 2};
  std::vector<AttackOutcome> outcomes;
  absl::StatusOr<CellResult> cell = RunCell(inputs, spec, &outcomes);
  ASSERT_TRUE(cell.ok());
  EXPECT_EQ(static_cast<int64_t>(outcomes.size()), cell->correct);
  int64_t flipped = 0, queries = 0;
  for (const AttackOutcome& o : outcomes) {
    flipped += o.success;
    queries += o.queries_used;
  }
  EXPECT_EQ(flipped, cell->flipped);
  EXPECT_EQ(queries, cell->queries);

  const std::vector<ClassDistribution> too_few(initial.begin(),
                                               initial.end() - 1);
  inputs.initial = &too_few;
  EXPECT_FALSE(RunCell(inputs, spec).ok());
}

// Answers the first call, then goes down.
class DiesAfterFirstCall : public Classifier {
 public:
  explicit DiesAfterFirstCall(const Classifier& inner) : inner_(inner) {}
  absl::StatusOr<std::vector<ClassDistribution>> Predict(
      std::span<const std::string> texts) const override {
    if (calls_++ > 0) return absl::UnavailableError("victim went away");
    return inner_.Predict(texts);
  }
  std::vector<std::string> class_names() const override {
    return inner_.class_names();
  }

 private:
  const Classifier& inner_;
  mutable std::atomic<int> calls_{0};
};

TEST(RunGridTest, VictimFailureIsRecorded) {
  const Fixture f;
  ExperimentConfig config;
  const testing::FailingClassifier down;
  EXPECT_FALSE(
      RunGrid(config, f.test, down, f.scores, StopWordSet::English()).ok());

  const DiesAfterFirstCall flaky(f.nb);
  absl::StatusOr<ExperimentReport> report =
      RunGrid(config, f.test, flaky, f.scores, StopWordSet::English());
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_TRUE(report->cells.empty());
  EXPECT_THAT(report->failure, HasSubstr("victim went away"));
  EXPECT_THAT(report->failure, HasSubstr("normal_10_4.json"));
}

TEST(RunGridTest, RejectsClassMismatch) {
  const Fixture f;
  const LabeledCorpus three = *LabeledCorpus::Create(
      {"a", "b", "c"}, {{"x", 0}, {"y", 1}, {"z", 2}});
  EXPECT_FALSE(
      RunGrid({}, three, f.nb, f.scores, StopWordSet::English()).ok());
}

TEST(RunGridTest, CheckpointsAreReused) {
  const Fixture f;
  TempDir dir;
  ExperimentConfig config;
  config.max_tokens = {2};
  config.max_tries = {2, 3};
  config.output_dir = dir.path().string();
  absl::StatusOr<ExperimentReport> first =
      RunGrid(config, f.test, f.nb, f.scores, StopWordSet::English());
  ASSERT_TRUE(first.ok());
  const fs::path cell = dir.path() / "cells" / "normal_2_3.json";
  ASSERT_TRUE(fs::exists(cell));
  ASSERT_TRUE(fs::exists(dir.path() / "cells" / "normal_2_2.json"));

  // Doctor one checkpoint; a rerun with the same config must pick it up.
  nlohmann::json doc = nlohmann::json::parse(Slurp(cell));
  doc["cell"]["flipped"] = 0;
  doc["cell"]["queries"] = 12345;
  std::ofstream(cell) << doc.dump();
  absl::StatusOr<ExperimentReport> second =
      RunGrid(config, f.test, f.nb, f.scores, StopWordSet::English());
  ASSERT_TRUE(second.ok());
  EXPECT_EQ(second->cells[1].queries, 12345);

  // A different config ignores the stale checkpoint.
  config.seed += 1;
  absl::StatusOr<ExperimentReport> third =
      RunGrid(config, f.test, f.nb, f.scores, StopWordSet::English());
  ASSERT_TRUE(third.ok());
  EXPECT_NE(third->cells[1].queries, 12345);
}

TEST(RenderReportTest, Formats) {
  ExperimentReport report;
  report.config_hash = "abc";
  report.seed = 7;
  report.sample_size = 4;
  report.initial_queries = 4;
  CellResult c;
  c.max_tokens = 10;
  c.max_tries = 4;
  c.sampled = 4;
  c.correct = 3;
  c.flipped = 1;
  c.queries = 10;
  report.cells = {c};
  EXPECT_EQ(RenderReport(report, ReportFormat::kCsv),
            "mode,max_tokens,max_tries,orig_acc,final_acc,success_pct,"
            "avg_queries,success_pct_all\n"
            "normal,10,4,75.0000,50.0000,33.3333,3.3333,25.0000\n");
  const nlohmann::json j =
      nlohmann::json::parse(RenderReport(report, ReportFormat::kJson));
  EXPECT_EQ(j["status"], "complete");
  EXPECT_DOUBLE_EQ(j["cells"][0]["success_pct"].get<double>(), 33.3333);
  EXPECT_FALSE(j.contains("failure"));
  const std::string md = RenderReport(report, ReportFormat::kMarkdown);
  EXPECT_THAT(md, HasSubstr("| Orig. Accuracy | Final Accuracy "
                            "| Attack Success % | Avg. Queries |"));
  EXPECT_THAT(md, HasSubstr("| normal | 10 | 4 | 75.0000 | 50.0000 |"));

  report.failure = "cell normal_10_4.json: UNAVAILABLE: down";
  EXPECT_EQ(nlohmann::json::parse(RenderReport(report, ReportFormat::kJson))
                ["status"],
            "incomplete");
  EXPECT_THAT(RenderReport(report, ReportFormat::kMarkdown),
              HasSubstr("Incomplete"));
}

TEST(RunExperimentTest, EndToEndFromFiles) {
  const Fixture f;
  TempDir dir;
  std::ofstream(dir.path() / "train.jsonl") << f.train.ToJsonl();
  std::ofstream(dir.path() / "test.jsonl") << f.test.ToJsonl();
  ExperimentConfig config;
  config.train_corpus = (dir.path() / "train.jsonl").string();
  config.test_corpus = (dir.path() / "test.jsonl").string();
  config.sample_size = 30;
  config.max_tokens = {1, 4};
  config.max_tries = {2};
  config.output_dir = (dir.path() / "out").string();
  absl::StatusOr<ExperimentReport> report = RunExperiment(config);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_EQ(report->sample_size, 30);
  for (const char* name :
       {"report.csv", "report.json", "report.md", "run_meta.json"}) {
    EXPECT_TRUE(fs::exists(dir.path() / "out" / name)) << name;
  }
  EXPECT_EQ(Slurp(dir.path() / "out" / "report.csv"),
            RenderReport(*report, ReportFormat::kCsv));

  config.sample_size = 1000;  // Clamped to the test set.
  config.output_dir.clear();
  EXPECT_EQ(RunExperiment(config)->sample_size, 60);

  config.test_corpus = (dir.path() / "missing.jsonl").string();
  EXPECT_FALSE(RunExperiment(config).ok());
}

}  // namespace
}  // namespace typostrike
