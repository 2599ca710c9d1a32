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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/time/clock.h"
#include "absl/time/time.h"
#include "typostrike/naive_bayes.h"
#include "typostrike/remote.h"
#include "string_view_compat.h"

namespace typostrike {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

double Ratio(int64_t num, int64_t den) {
  return den == 0 ? 0.0
                  : static_cast<double>(num) / static_cast<double>(den);
}

double Round4(double x) { return std::round(x * 1e4) / 1e4; }

std::string CellFileName(const CellSpec& spec) {
  return absl::StrCat(Absl(ModeName(spec.mode)), "_",
                      spec.budget.max_tokens_to_perturb, "_",
                      spec.budget.max_tries_per_token, ".json");
}

CellResult EmptyCell(const CellSpec& spec) {
  CellResult cell;
  cell.mode = spec.mode;
  if (spec.mode != AttackMode::kExhaustive) {
    cell.max_tokens = spec.budget.max_tokens_to_perturb;
    cell.max_tries = spec.budget.max_tries_per_token;
  }
  return cell;
}

absl::Status WriteFile(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  if (!out) {
    return absl::DataLossError(absl::StrCat("cannot write ", path.string()));
  }
  return absl::OkStatus();
}

// A cell checkpoint counts only if it was written under the same config.
std::optional<CellResult> LoadCheckpoint(const fs::path& path,
                                         const std::string& config_hash) {
  absl::StatusOr<std::string> contents = ReadFile(path.string());
  if (!contents.ok()) return std::nullopt;
  const json doc = json::parse(*contents, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || doc.value("config_hash", "") != config_hash) {
    return std::nullopt;
  }
  try {
    return doc.at("cell").get<CellResult>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

}  // namespace

absl::StatusOr<LabeledCorpus> SampleTestSet(const LabeledCorpus& corpus,
                                            size_t n, uint64_t seed) {
  if (n > corpus.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot sample ", n, " texts from a corpus of ", corpus.size()));
  }
  std::vector<Sample> picked;
  picked.reserve(n);
  std::mt19937_64 rng(seed);
  // Selection sampling over a forward range keeps corpus order.
  std::sample(corpus.samples().begin(), corpus.samples().end(),
              std::back_inserter(picked), n, rng);
  return LabeledCorpus::Create(corpus.class_names(), std::move(picked));
}

absl::Status ExperimentConfig::Validate() const {
  if (test_corpus.empty()) return absl::InvalidArgumentError("no test corpus");
  if (train_corpus.empty() && (scores.empty() || (victim_model.empty() &&
                                                  victim_url.empty()))) {
    return absl::InvalidArgumentError(
        "a training corpus is required unless both a score table and a "
        "victim are given");
  }
  if (min_freq < 1) return absl::InvalidArgumentError("min_freq must be >= 1");
  if (modes.empty()) return absl::InvalidArgumentError("no attack modes");
  if (kinds.empty()) return absl::InvalidArgumentError("no perturbation kinds");
  const bool needs_grid =
      std::any_of(modes.begin(), modes.end(),
                  [](AttackMode m) { return m != AttackMode::kExhaustive; });
  if (needs_grid && (max_tokens.empty() || max_tries.empty())) {
    return absl::InvalidArgumentError("empty budget grid");
  }
  for (const int v : max_tokens) {
    if (v < 1) return absl::InvalidArgumentError("max_tokens values must be >= 1");
  }
  for (const int v : max_tries) {
    if (v < 1) return absl::InvalidArgumentError("max_tries values must be >= 1");
  }
  if (sample_size < 1) return absl::InvalidArgumentError("sample_size < 1");
  return absl::OkStatus();
}

json ExperimentConfig::ToJson() const {
  std::vector<std::string> mode_names;
  for (const AttackMode m : modes) mode_names.emplace_back(ModeName(m));
  return json{{"train_corpus", train_corpus},
              {"test_corpus", test_corpus},
              {"scores", scores},
              {"stopwords", stopwords},
              {"min_freq", min_freq},
              {"victim_url", victim_url},
              {"victim_model", victim_model},
              {"max_tokens", max_tokens},
              {"max_tries", max_tries},
              {"kinds", FormatKinds(kinds)},
              {"exhaustive_kinds", FormatKinds(exhaustive_kinds)},
              {"modes", mode_names},
              {"sample_size", sample_size},
              {"seed", seed}};
}

std::string ExperimentConfig::Hash() const { return Fnv1aHex(ToJson().dump()); }

double CellResult::orig_acc() const { return Ratio(correct, sampled); }
double CellResult::final_acc() const {
  return Ratio(correct - flipped, sampled);
}
double CellResult::success_rate() const { return Ratio(flipped, correct); }
double CellResult::success_rate_all() const { return Ratio(flipped, sampled); }
double CellResult::avg_queries() const { return Ratio(queries, correct); }

void to_json(json& j, const CellResult& cell) {
  j = json{{"mode", ModeName(cell.mode)}, {"max_tokens", cell.max_tokens},
           {"max_tries", cell.max_tries}, {"sampled", cell.sampled},
           {"correct", cell.correct},     {"flipped", cell.flipped},
           {"queries", cell.queries}};
}

void from_json(const json& j, CellResult& cell) {
  absl::StatusOr<AttackMode> mode = ParseMode(j.at("mode").get<std::string>());
  if (!mode.ok()) {
    throw json::other_error::create(501, std::string(mode.status().message()),
                                    &j);
  }
  cell.mode = *mode;
  cell.max_tokens = j.at("max_tokens").get<int>();
  cell.max_tries = j.at("max_tries").get<int>();
  cell.sampled = j.at("sampled").get<int64_t>();
  cell.correct = j.at("correct").get<int64_t>();
  cell.flipped = j.at("flipped").get<int64_t>();
  cell.queries = j.at("queries").get<int64_t>();
}

std::mt19937_64 SampleRng(uint64_t seed, uint64_t index) {
  std::seed_seq seq{static_cast<uint32_t>(seed),
                    static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(index),
                    static_cast<uint32_t>(index >> 32), 0x5a17u};
  return std::mt19937_64(seq);
}

absl::StatusOr<CellResult> RunCell(const CellInputs& inputs,
                                   const CellSpec& spec,
                                   std::vector<AttackOutcome>* outcomes) {
  const std::vector<Sample>& samples = *inputs.samples;
  const std::vector<ClassDistribution>& initial = *inputs.initial;
  if (samples.size() != initial.size()) {
    return absl::InvalidArgumentError("one initial prediction per sample");
  }
  CellResult cell = EmptyCell(spec);
  cell.sampled = static_cast<int64_t>(samples.size());

  std::vector<std::optional<AttackOutcome>> results(samples.size());
  std::vector<int64_t> ledger_totals(samples.size(), 0);
  std::mutex error_mu;
  absl::Status first_error;

  AttackOptions options;
  options.budget = spec.budget;
  options.kinds = spec.kinds;
  options.mode = spec.mode;
  options.stopwords = inputs.stopwords;

  auto attack_one = [&](size_t i) -> absl::Status {
    if (initial[i].predicted != samples[i].label) return absl::OkStatus();
    QueryLedger ledger;
    CountingClassifier counted(*inputs.victim, ledger);
    absl::StatusOr<AttackOutcome> outcome;
    if (spec.mode == AttackMode::kExhaustive) {
      outcome = ExhaustiveAttack(samples[i].text, initial[i], counted,
                                 spec.kinds);
    } else {
      std::mt19937_64 rng = SampleRng(inputs.seed, i);
      outcome = WordScoreAttack(samples[i].text, initial[i], counted,
                                *inputs.scores, options, rng);
    }
    if (!outcome.ok()) return outcome.status();
    ledger_totals[i] = ledger.total();
    results[i] = *std::move(outcome);
    return absl::OkStatus();
  };
  auto worker = [&](size_t begin, size_t step) {
    for (size_t i = begin; i < samples.size(); i += step) {
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error.ok()) return;
      }
      if (absl::Status s = attack_one(i); !s.ok()) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error.ok()) first_error = s;
        return;
      }
    }
  };
  const auto workers = static_cast<size_t>(std::max(1, inputs.jobs));
  if (workers == 1) {
    worker(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker, w, workers);
  }
  if (!first_error.ok()) return first_error;

  for (size_t i = 0; i < samples.size(); ++i) {
    if (!results[i].has_value()) continue;
    ++cell.correct;
    cell.queries += ledger_totals[i];
    if (results[i]->success) ++cell.flipped;
    if (outcomes != nullptr) outcomes->push_back(*std::move(results[i]));
  }
  return cell;
}

std::vector<CellSpec> ExpandGrid(const ExperimentConfig& config) {
  std::vector<CellSpec> cells;
  for (const AttackMode mode : config.modes) {
    if (mode == AttackMode::kExhaustive) {
      cells.push_back(CellSpec{mode, AttackBudget{0, 0},
                               config.exhaustive_kinds});
      continue;
    }
    for (const int tokens : config.max_tokens) {
      for (const int tries : config.max_tries) {
        cells.push_back(
            CellSpec{mode, AttackBudget{tokens, tries}, config.kinds});
      }
    }
  }
  return cells;
}

absl::StatusOr<ExperimentReport> RunGrid(const ExperimentConfig& config,
                                         const LabeledCorpus& test_sample,
                                         const Classifier& victim,
                                         const WordScoreTable& scores,
                                         const StopWordSet& stopwords) {
  if (victim.class_names().size() !=
      static_cast<size_t>(test_sample.num_classes())) {
    return absl::InvalidArgumentError(
        "victim and test corpus disagree on the number of classes");
  }
  std::vector<Sample> samples = test_sample.samples();
  std::vector<std::string> texts;
  for (Sample& s : samples) {
    s.text = Normalize(s.text);
    texts.push_back(s.text);
  }
  ExperimentReport report;
  report.config_hash = config.Hash();
  report.seed = config.seed;
  report.sample_size = static_cast<int64_t>(samples.size());
  if (texts.empty()) return report;

  absl::StatusOr<std::vector<ClassDistribution>> initial =
      victim.Predict(texts);
  if (!initial.ok()) return initial.status();
  report.initial_queries = static_cast<int64_t>(texts.size());

  CellInputs inputs;
  inputs.samples = &samples;
  inputs.initial = &*initial;
  inputs.victim = &victim;
  inputs.scores = &scores;
  inputs.stopwords = &stopwords;
  inputs.seed = config.seed;
  inputs.jobs = config.jobs;

  fs::path checkpoint_dir;
  if (!config.output_dir.empty()) {
    checkpoint_dir = fs::path(config.output_dir) / "cells";
    std::error_code ec;
    fs::create_directories(checkpoint_dir, ec);
    if (ec) {
      return absl::DataLossError(absl::StrCat(
          "cannot create ", checkpoint_dir.string(), ": ", ec.message()));
    }
  }

  for (const CellSpec& spec : ExpandGrid(config)) {
    const fs::path checkpoint =
        checkpoint_dir.empty() ? fs::path() : checkpoint_dir / CellFileName(spec);
    if (!checkpoint.empty()) {
      if (std::optional<CellResult> done =
              LoadCheckpoint(checkpoint, report.config_hash)) {
        report.cells.push_back(*done);
        continue;
      }
    }
    absl::StatusOr<CellResult> cell = RunCell(inputs, spec);
    if (!cell.ok()) {
      report.failure = absl::StrCat("cell ", CellFileName(spec), ": ",
                                    cell.status().ToString());
      break;
    }
    if (!checkpoint.empty()) {
      const json doc = {{"config_hash", report.config_hash}, {"cell", *cell}};
      if (absl::Status s = WriteFile(checkpoint, doc.dump() + "\n"); !s.ok()) {
        return s;
      }
    }
    report.cells.push_back(*cell);
  }
  return report;
}

absl::StatusOr<ExperimentReport> RunExperiment(
    const ExperimentConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  const absl::Time started = absl::Now();

  StopWordSet stopwords = StopWordSet::English();
  if (!config.stopwords.empty()) {
    absl::StatusOr<StopWordSet> loaded = StopWordSet::Load(config.stopwords);
    if (!loaded.ok()) return loaded.status();
    stopwords = *std::move(loaded);
  }

  std::optional<LabeledCorpus> train;
  if (!config.train_corpus.empty()) {
    absl::StatusOr<LabeledCorpus> loaded =
        LabeledCorpus::LoadJsonl(config.train_corpus);
    if (!loaded.ok()) return loaded.status();
    train = *std::move(loaded);
  }
  absl::StatusOr<LabeledCorpus> test =
      LabeledCorpus::LoadJsonl(config.test_corpus);
  if (!test.ok()) return test.status();
  absl::StatusOr<LabeledCorpus> sample =
      SampleTestSet(*test, std::min(config.sample_size, test->size()),
                    config.seed);
  if (!sample.ok()) return sample.status();

  absl::StatusOr<WordScoreTable> scores =
      config.scores.empty() ? BuildScoreTable(*train, stopwords, config.min_freq)
                            : WordScoreTable::Load(config.scores);
  if (!scores.ok()) return scores.status();

  std::unique_ptr<Classifier> victim;
  if (!config.victim_url.empty()) {
    absl::StatusOr<std::unique_ptr<RemoteClassifier>> remote =
        RemoteClassifier::Connect(config.victim_url);
    if (!remote.ok()) return remote.status();
    victim = *std::move(remote);
  } else {
    absl::StatusOr<NaiveBayesModel> nb =
        config.victim_model.empty() ? NaiveBayesModel::Train(*train)
                                    : NaiveBayesModel::Load(config.victim_model);
    if (!nb.ok()) return nb.status();
    victim = std::make_unique<NaiveBayesModel>(*std::move(nb));
  }

  absl::StatusOr<ExperimentReport> report =
      RunGrid(config, *sample, *victim, *scores, stopwords);
  if (!report.ok()) return report;

  if (!config.output_dir.empty()) {
    if (absl::Status s = WriteReports(*report, config.output_dir); !s.ok()) {
      return s;
    }
    // Wall-clock metadata lives beside the reports so that the reports
    // themselves stay byte-for-byte reproducible.
    const json meta = {
        {"config_hash", report->config_hash},
        {"config", config.ToJson()},
        {"started", absl::FormatTime(started, absl::UTCTimeZone())},
        {"finished", absl::FormatTime(absl::Now(), absl::UTCTimeZone())}};
    if (absl::Status s = WriteFile(fs::path(config.output_dir) / "run_meta.json",
                                   meta.dump(2) + "\n");
        !s.ok()) {
      return s;
    }
  }
  return report;
}

std::string RenderReport(const ExperimentReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv: {
      std::string out =
          "mode,max_tokens,max_tries,orig_acc,final_acc,success_pct,"
          "avg_queries,success_pct_all\n";
      for (const CellResult& c : report.cells) {
        absl::StrAppendFormat(&out, "%s,%d,%d,%.4f,%.4f,%.4f,%.4f,%.4f\n",
                              Absl(ModeName(c.mode)), c.max_tokens, c.max_tries,
                              100.0 * c.orig_acc(), 100.0 * c.final_acc(),
                              100.0 * c.success_rate(), c.avg_queries(),
                              100.0 * c.success_rate_all());
      }
      return out;
    }
    case ReportFormat::kJson: {
      json cells = json::array();
      for (const CellResult& c : report.cells) {
        json row = c;
        row["orig_acc"] = Round4(100.0 * c.orig_acc());
        row["final_acc"] = Round4(100.0 * c.final_acc());
        row["success_pct"] = Round4(100.0 * c.success_rate());
        row["avg_queries"] = Round4(c.avg_queries());
        row["success_pct_all"] = Round4(100.0 * c.success_rate_all());
        cells.push_back(std::move(row));
      }
      json doc = {{"config_hash", report.config_hash},
                  {"seed", report.seed},
                  {"sample_size", report.sample_size},
                  {"initial_queries", report.initial_queries},
                  {"status", report.failure.empty() ? "complete" : "incomplete"},
                  {"cells", std::move(cells)}};
      if (!report.failure.empty()) doc["failure"] = report.failure;
      return doc.dump(2) + "\n";
    }
    case ReportFormat::kMarkdown: {
      std::string out = absl::StrFormat(
          "# Attack report\n\nConfig `%s`, seed %d, %d sampled texts, %d "
          "initial queries.\n\n",
          report.config_hash, report.seed, report.sample_size,
          report.initial_queries);
      if (!report.failure.empty()) {
        absl::StrAppend(&out, "**Incomplete:** ", report.failure, "\n\n");
      }
      absl::StrAppend(
          &out,
          "| Mode | Max tokens | Max tries | Orig. Accuracy | Final Accuracy "
          "| Attack Success % | Avg. Queries | Attack Success % (all) |\n",
          "|---|---:|---:|---:|---:|---:|---:|---:|\n");
      for (const CellResult& c : report.cells) {
        absl::StrAppendFormat(
            &out, "| %s | %d | %d | %.4f | %.4f | %.4f | %.4f | %.4f |\n",
            Absl(ModeName(c.mode)), c.max_tokens, c.max_tries, 100.0 * c.orig_acc(),
            100.0 * c.final_acc(), 100.0 * c.success_rate(), c.avg_queries(),
            100.0 * c.success_rate_all());
      }
      return out;
    }
  }
  return "";
}

absl::Status WriteReports(const ExperimentReport& report,
                          const std::string& output_dir) {
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) {
    return absl::DataLossError(
        absl::StrCat("cannot create ", output_dir, ": ", ec.message()));
  }
  const fs::path dir(output_dir);
  for (const auto& [name, format] :
       {std::pair{"report.csv", ReportFormat::kCsv},
        std::pair{"report.json", ReportFormat::kJson},
        std::pair{"report.md", ReportFormat::kMarkdown}}) {
    if (absl::Status s = WriteFile(dir / name, RenderReport(report, format));
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

}  // namespace typostrike
