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

#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "typostrike/attack.h"
#include "typostrike/boundary.h"
#include "typostrike/corpus.h"
#include "typostrike/experiment.h"
#include "typostrike/naive_bayes.h"
#include "typostrike/perturbation.h"
#include "typostrike/remote.h"
#include "typostrike/text.h"
#include "typostrike/word_scoring.h"

namespace typostrike {
namespace {

using json = nlohmann::json;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

// Options shared by several subcommands. Unset strings mean "not given".
struct Flags {
  std::string corpus;
  std::string train;
  std::string test;
  std::string scores;
  std::string stopwords;
  int min_freq = kDefaultMinFreq;
  std::string victim_url;
  std::string victim_local;
  std::vector<std::string> max_tokens = {"10"};
  std::vector<std::string> max_tries = {"4"};
  std::vector<std::string> modes = {"normal"};
  std::string kinds;
  std::string exhaustive_kinds;
  uint64_t seed = kDefaultSeed;
  int jobs = 1;
  std::vector<std::string> texts;
  std::string input;
  std::string output = "-";
  std::string out_dir;
  size_t sample_size = 500;
  std::string vocab;
  double probability = 0.5;
  int edits = 1;
  std::string model;
  std::string bind = "127.0.0.1:8080";
};

const CLI::Validator& KindsCheck() {
  static const CLI::Validator* const check = new CLI::Validator(
      [](std::string& value) -> std::string {
        absl::StatusOr<KindSet> kinds = ParseKinds(value);
        if (!kinds.ok()) return std::string(kinds.status().message());
        if (kinds->empty()) return "no perturbation kinds given";
        return "";
      },
      "KINDS");
  return *check;
}

const CLI::Validator& GridCheck() {
  static const CLI::Validator* const check = new CLI::Validator(
      [](std::string& value) -> std::string {
        absl::StatusOr<std::vector<int>> grid = ParseIntGrid({value});
        return grid.ok() ? "" : std::string(grid.status().message());
      },
      "N|A-B");
  return *check;
}

const CLI::Validator& ModeCheck() {
  static const CLI::Validator* const check = new CLI::Validator(
      [](std::string& value) -> std::string {
        absl::StatusOr<AttackMode> mode = ParseMode(value);
        return mode.ok() ? "" : std::string(mode.status().message());
      },
      "{normal,forgetful,exhaustive}");
  return *check;
}

absl::Status WriteOutput(const std::string& path, std::string_view contents,
                         std::ostream& out) {
  if (path.empty() || path == "-") {
    out << contents;
    out.flush();
    return out ? absl::OkStatus() : absl::DataLossError("write failed");
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << contents;
  file.close();
  if (!file) return absl::DataLossError(absl::StrCat("cannot write ", path));
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadInput(const std::string& path,
                                      std::istream& in) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
  return ReadFile(path);
}

// One text per line. JSON lines are accepted as well so that other
// subcommands' outputs can be piped in: corpus lines give "text", attack
// outcomes "final_text" and augmentation records "chars". A corpus header
// line is skipped.
absl::StatusOr<std::vector<std::string>> ParseTextLines(
    std::string_view contents) {
  std::vector<std::string> texts;
  size_t begin = 0;
  int line_number = 0;
  while (begin < contents.size()) {
    size_t end = contents.find('\n', begin);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(begin, end - begin);
    begin = end + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() != '{') {
      texts.emplace_back(line);
      continue;
    }
    const json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
      texts.emplace_back(line);
      continue;
    }
    bool found = false;
    for (const char* key : {"text", "final_text", "chars"}) {
      if (auto it = doc.find(key); it != doc.end() && it->is_string()) {
        texts.push_back(it->get<std::string>());
        found = true;
        break;
      }
    }
    if (!found && !doc.contains("classes")) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": JSON line without a text"));
    }
  }
  return texts;
}

absl::StatusOr<StopWordSet> LoadStopWords(const std::string& path) {
  if (path.empty()) return StopWordSet::English();
  return StopWordSet::Load(path);
}

// --victim-url, then --victim-local, then the environment, then a model
// trained on `train` when one is given.
absl::StatusOr<std::unique_ptr<Classifier>> MakeVictim(
    const Flags& flags, const LabeledCorpus* train) {
  std::string url = flags.victim_url;
  if (url.empty() && flags.victim_local.empty()) {
    if (const char* env = std::getenv(kVictimUrlEnv); env != nullptr) url = env;
  }
  if (!url.empty()) {
    absl::StatusOr<std::unique_ptr<RemoteClassifier>> remote =
        RemoteClassifier::Connect(url);
    if (!remote.ok()) return remote.status();
    return std::unique_ptr<Classifier>(*std::move(remote));
  }
  absl::StatusOr<NaiveBayesModel> model =
      !flags.victim_local.empty() ? NaiveBayesModel::Load(flags.victim_local)
      : train != nullptr
          ? NaiveBayesModel::Train(*train)
          : absl::InvalidArgumentError(
                "no victim: give --victim-url, --victim-local or a corpus");
  if (!model.ok()) return model.status();
  return std::unique_ptr<Classifier>(
      std::make_unique<NaiveBayesModel>(*std::move(model)));
}

void AddScoringFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--stopwords", f.stopwords,
                  "Stop-word file, one word per line (default: built-in "
                  "English list)");
  cmd->add_option("--min-freq", f.min_freq,
                  "Drop words seen fewer times than this across all classes")
      ->check(CLI::Range(1, std::numeric_limits<int>::max()))
      ->capture_default_str();
}

void AddVictimFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--victim-url", f.victim_url,
                  absl::StrCat("Remote victim, http://host:port (default: $",
                               kVictimUrlEnv, ")"));
  cmd->add_option("--victim-local", f.victim_local,
                  "Naive Bayes model file to use as the victim");
}

void AddSeedJobs(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  cmd->add_option("--jobs", f.jobs, "Worker threads")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
}

absl::Status RunScore(const Flags& f, Streams io) {
  absl::StatusOr<LabeledCorpus> corpus = LabeledCorpus::LoadJsonl(f.corpus);
  if (!corpus.ok()) return corpus.status();
  absl::StatusOr<StopWordSet> stopwords = LoadStopWords(f.stopwords);
  if (!stopwords.ok()) return stopwords.status();
  absl::StatusOr<WordScoreTable> table =
      BuildScoreTable(*corpus, *stopwords, f.min_freq);
  if (!table.ok()) return table.status();
  return WriteOutput(f.output, table->ToJson(), io.out);
}

absl::Status RunTrainNb(const Flags& f, Streams io) {
  absl::StatusOr<LabeledCorpus> corpus = LabeledCorpus::LoadJsonl(f.corpus);
  if (!corpus.ok()) return corpus.status();
  absl::StatusOr<NaiveBayesModel> model = NaiveBayesModel::Train(*corpus);
  if (!model.ok()) return model.status();
  return WriteOutput(f.output, model->ToJson(), io.out);
}

absl::Status RunAttack(const Flags& f, bool kinds_given, Streams io) {
  std::vector<std::string> texts = f.texts;
  if (!f.input.empty()) {
    absl::StatusOr<std::string> contents = ReadInput(f.input, io.in);
    if (!contents.ok()) return contents.status();
    absl::StatusOr<std::vector<std::string>> lines = ParseTextLines(*contents);
    if (!lines.ok()) return lines.status();
    texts.insert(texts.end(), lines->begin(), lines->end());
  }
  for (std::string& t : texts) t = Normalize(t);

  absl::StatusOr<AttackMode> mode = ParseMode(f.modes.front());
  if (!mode.ok()) return mode.status();
  absl::StatusOr<StopWordSet> stopwords = LoadStopWords(f.stopwords);
  if (!stopwords.ok()) return stopwords.status();

  std::optional<LabeledCorpus> corpus;
  if (!f.corpus.empty()) {
    absl::StatusOr<LabeledCorpus> loaded = LabeledCorpus::LoadJsonl(f.corpus);
    if (!loaded.ok()) return loaded.status();
    corpus = *std::move(loaded);
  }
  WordScoreTable scores;
  if (*mode != AttackMode::kExhaustive) {
    absl::StatusOr<WordScoreTable> table =
        !f.scores.empty() ? WordScoreTable::Load(f.scores)
        : corpus.has_value()
            ? BuildScoreTable(*corpus, *stopwords, f.min_freq)
            : absl::InvalidArgumentError("give --scores or --corpus");
    if (!table.ok()) return table.status();
    scores = *std::move(table);
  }
  absl::StatusOr<std::unique_ptr<Classifier>> victim =
      MakeVictim(f, corpus.has_value() ? &*corpus : nullptr);
  if (!victim.ok()) return victim.status();

  AttackOptions options;
  absl::StatusOr<std::vector<int>> tokens = ParseIntGrid(f.max_tokens);
  absl::StatusOr<std::vector<int>> tries = ParseIntGrid(f.max_tries);
  if (!tokens.ok()) return tokens.status();
  if (!tries.ok()) return tries.status();
  if (tokens->size() != 1 || tries->size() != 1) {
    return absl::InvalidArgumentError(
        "attack takes a single --max-tokens and --max-tries value");
  }
  options.budget = AttackBudget{tokens->front(), tries->front()};
  options.mode = *mode;
  options.stopwords = &*stopwords;
  KindSet kinds = *mode == AttackMode::kExhaustive ? ExhaustiveKinds()
                                                   : DefaultAttackKinds();
  if (kinds_given) {
    absl::StatusOr<KindSet> parsed = ParseKinds(f.kinds);
    if (!parsed.ok()) return parsed.status();
    kinds = *parsed;
  }
  options.kinds = kinds;

  std::vector<std::string> lines(texts.size());
  std::mutex mu;
  absl::Status first_error;
  auto attack_one = [&](size_t i) -> absl::Status {
    absl::StatusOr<ClassDistribution> initial = (*victim)->PredictOne(texts[i]);
    if (!initial.ok()) return initial.status();
    absl::StatusOr<AttackOutcome> outcome;
    if (*mode == AttackMode::kExhaustive) {
      outcome = ExhaustiveAttack(texts[i], *initial, **victim, kinds);
    } else {
      std::mt19937_64 rng = SampleRng(f.seed, i);
      outcome = WordScoreAttack(texts[i], *initial, **victim, scores, options,
                                rng);
    }
    if (!outcome.ok()) return outcome.status();
    lines[i] = json(*outcome).dump();
    return absl::OkStatus();
  };
  auto worker = [&](size_t begin, size_t step) {
    for (size_t i = begin; i < texts.size(); i += step) {
      absl::Status s = attack_one(i);
      std::lock_guard<std::mutex> lock(mu);
      if (!s.ok() && first_error.ok()) first_error = s;
      if (!first_error.ok()) return;
    }
  };
  if (f.jobs <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < f.jobs; ++w) {
      pool.emplace_back(worker, static_cast<size_t>(w),
                        static_cast<size_t>(f.jobs));
    }
  }
  if (!first_error.ok()) return first_error;
  std::string body;
  for (const std::string& line : lines) absl::StrAppend(&body, line, "\n");
  return WriteOutput(f.output, body, io.out);
}

absl::Status RunEvaluate(const Flags& f, bool kinds_given, Streams io) {
  ExperimentConfig config;
  config.train_corpus = f.train;
  config.test_corpus = f.test;
  config.scores = f.scores;
  config.stopwords = f.stopwords;
  config.min_freq = f.min_freq;
  config.victim_url = f.victim_url;
  if (config.victim_url.empty() && f.victim_local.empty()) {
    if (const char* env = std::getenv(kVictimUrlEnv); env != nullptr) {
      config.victim_url = env;
    }
  }
  config.victim_model = f.victim_local;
  absl::StatusOr<std::vector<int>> tokens = ParseIntGrid(f.max_tokens);
  absl::StatusOr<std::vector<int>> tries = ParseIntGrid(f.max_tries);
  if (!tokens.ok()) return tokens.status();
  if (!tries.ok()) return tries.status();
  config.max_tokens = *tokens;
  config.max_tries = *tries;
  config.modes.clear();
  for (const std::string& name : f.modes) {
    absl::StatusOr<AttackMode> mode = ParseMode(name);
    if (!mode.ok()) return mode.status();
    config.modes.push_back(*mode);
  }
  if (kinds_given) {
    absl::StatusOr<KindSet> kinds = ParseKinds(f.kinds);
    if (!kinds.ok()) return kinds.status();
    config.kinds = *kinds;
  }
  if (!f.exhaustive_kinds.empty()) {
    absl::StatusOr<KindSet> kinds = ParseKinds(f.exhaustive_kinds);
    if (!kinds.ok()) return kinds.status();
    config.exhaustive_kinds = *kinds;
  }
  config.sample_size = f.sample_size;
  config.seed = f.seed;
  config.jobs = f.jobs;
  config.output_dir = f.out_dir;

  absl::StatusOr<ExperimentReport> report = RunExperiment(config);
  if (!report.ok()) return report.status();
  io.out << RenderReport(*report, ReportFormat::kMarkdown);
  io.out.flush();
  if (!report->failure.empty()) {
    return absl::UnavailableError(
        absl::StrCat("run incomplete: ", report->failure));
  }
  return absl::OkStatus();
}

absl::Status RunPerturbDataset(const Flags& f, bool kinds_given, Streams io) {
  absl::StatusOr<std::string> contents = ReadInput(f.input, io.in);
  if (!contents.ok()) return contents.status();
  absl::StatusOr<std::vector<std::string>> texts = ParseTextLines(*contents);
  if (!texts.ok()) return texts.status();
  absl::StatusOr<WordPieceVocab> vocab = WordPieceVocab::Load(f.vocab);
  if (!vocab.ok()) return vocab.status();

  AugmentationPolicy policy;
  policy.probability = f.probability;
  policy.edits_per_sentence = f.edits;
  if (kinds_given) {
    absl::StatusOr<KindSet> kinds = ParseKinds(f.kinds);
    if (!kinds.ok()) return kinds.status();
    policy.kind_weights.clear();
    for (const PerturbationKind k : *kinds) policy.kind_weights[k] = 1.0;
  }
  std::ostringstream buffer;
  if (absl::Status s = EmitAugmentedDataset(*texts, *vocab, policy, f.seed,
                                            buffer, f.jobs);
      !s.ok()) {
    return s;
  }
  return WriteOutput(f.output, buffer.str(), io.out);
}

absl::Status RunServe(const Flags& f, Streams io) {
  absl::StatusOr<std::pair<std::string, int>> address =
      ParseBindAddress(f.bind);
  if (!address.ok()) return address.status();
  absl::StatusOr<NaiveBayesModel> model =
      !f.model.empty() ? NaiveBayesModel::Load(f.model)
      : !f.corpus.empty()
          ? [&]() -> absl::StatusOr<NaiveBayesModel> {
              absl::StatusOr<LabeledCorpus> corpus =
                  LabeledCorpus::LoadJsonl(f.corpus);
              if (!corpus.ok()) return corpus.status();
              return NaiveBayesModel::Train(*corpus);
            }()
          : absl::InvalidArgumentError("give --model or --corpus");
  if (!model.ok()) return model.status();

  // Termination signals are taken synchronously by a waiter thread, which
  // stops the server; Listen() then returns on this thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  PredictionServer server(*model);
  absl::StatusOr<int> port = server.Bind(address->first, address->second);
  if (!port.ok()) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    return port.status();
  }
  io.err << "listening on " << address->first << ":" << *port << std::endl;

  std::atomic<bool> finished = false;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (!finished) server.Stop();
  });
  absl::Status listened = server.Listen();
  finished = true;
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  return listened;
}

}  // namespace

absl::StatusOr<std::vector<int>> ParseIntGrid(
    const std::vector<std::string>& items) {
  std::vector<int> values;
  for (const std::string& item : items) {
    int lo = 0;
    int hi = 0;
    const size_t dash = item.find('-', 1);
    const bool ok =
        dash == std::string::npos
            ? absl::SimpleAtoi(item, &lo) && (hi = lo, true)
            : absl::SimpleAtoi(item.substr(0, dash), &lo) &&
                  absl::SimpleAtoi(item.substr(dash + 1), &hi);
    if (!ok || lo > hi) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected N or A-B with A <= B, got '", item, "'"));
    }
    if (lo < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("values must be at least 1, got '", item, "'"));
    }
    for (int v = lo; v <= hi; ++v) values.push_back(v);
  }
  return values;
}

int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"Query-budgeted adversarial misspelling attacks on text "
               "classifiers.",
               "typostrike"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML file with one [subcommand] section "
                 "per command; keys are long flag names");
  app.set_version_flag("--version", "typostrike 0.1.0");

  Flags f;

  CLI::App* score = app.add_subcommand(
      "score", "Write the word score table of a labeled JSONL corpus");
  score->add_option("--corpus", f.corpus, "Labeled corpus (JSONL)")
      ->required();
  AddScoringFlags(score, f);
  score->add_option("-o,--output", f.output, "Output file, - for stdout")
      ->capture_default_str();

  CLI::App* train = app.add_subcommand(
      "train-nb", "Train a Naive Bayes victim model on a labeled corpus");
  train->add_option("--corpus", f.corpus, "Labeled corpus (JSONL)")
      ->required();
  train->add_option("-o,--output", f.output, "Output file, - for stdout")
      ->capture_default_str();

  CLI::App* attack = app.add_subcommand(
      "attack", "Attack texts and print one outcome JSON line per text");
  attack->add_option("--text", f.texts, "Text to attack (repeatable)");
  attack->add_option("--input", f.input,
                     "File with one text per line, - for stdin; JSON lines "
                     "with a text field are accepted");
  attack->add_option("--scores", f.scores, "Word score table file");
  attack->add_option("--corpus", f.corpus,
                     "Labeled corpus used to build the scores and victim "
                     "when they are not given");
  AddScoringFlags(attack, f);
  AddVictimFlags(attack, f);
  attack->add_option("--max-tokens", f.max_tokens,
                     "Words perturbed at most")
      ->check(GridCheck())
      ->capture_default_str();
  attack->add_option("--max-tries", f.max_tries, "Tries per word")
      ->check(GridCheck())
      ->capture_default_str();
  attack->add_option("--mode", f.modes, "normal, forgetful or exhaustive")
      ->check(ModeCheck())
      ->expected(1)
      ->capture_default_str();
  CLI::Option* attack_kinds =
      attack->add_option("--kinds", f.kinds,
                         "Comma list of insert, delete, swap, substitute, "
                         "split, merge; or chars, whitespace, all")
          ->check(KindsCheck());
  AddSeedJobs(attack, f);
  attack->add_option("-o,--output", f.output, "Output file, - for stdout")
      ->capture_default_str();

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Run a budget-grid experiment and write report files");
  evaluate->add_option("--train", f.train, "Training corpus (JSONL)");
  evaluate->add_option("--test", f.test, "Test corpus (JSONL)")->required();
  evaluate->add_option("--scores", f.scores,
                       "Word score table file (default: built from --train)");
  AddScoringFlags(evaluate, f);
  AddVictimFlags(evaluate, f);
  evaluate
      ->add_option("--max-tokens", f.max_tokens,
                   "Comma list of values or ranges, e.g. 1-40")
      ->delimiter(',')
      ->check(GridCheck())
      ->capture_default_str();
  evaluate
      ->add_option("--max-tries", f.max_tries,
                   "Comma list of values or ranges, e.g. 1-4")
      ->delimiter(',')
      ->check(GridCheck())
      ->capture_default_str();
  evaluate->add_option("--mode", f.modes, "Comma list of attack modes")
      ->delimiter(',')
      ->check(ModeCheck())
      ->capture_default_str();
  CLI::Option* evaluate_kinds =
      evaluate
          ->add_option("--kinds", f.kinds,
                       "Perturbation kinds for the budgeted modes")
          ->check(KindsCheck());
  evaluate
      ->add_option("--exhaustive-kinds", f.exhaustive_kinds,
                   "Perturbation kinds for the exhaustive mode (default: "
                   "insert,delete,swap,substitute)")
      ->check(KindsCheck());
  evaluate->add_option("--sample-size", f.sample_size, "Test texts sampled")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  AddSeedJobs(evaluate, f);
  evaluate->add_option("--out-dir", f.out_dir,
                       "Directory for reports and cell checkpoints")
      ->required();

  CLI::App* perturb = app.add_subcommand(
      "perturb-dataset",
      "Write boundary-labeled, randomly misspelled training records");
  perturb->add_option("--input", f.input,
                      "Text file, one sentence per line, - for stdin")
      ->required();
  perturb->add_option("--vocab", f.vocab, "WordPiece vocab.txt")->required();
  perturb->add_option("--probability", f.probability,
                      "Chance that a sentence is perturbed")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  perturb->add_option("--edits", f.edits, "Edits per perturbed sentence")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  CLI::Option* perturb_kinds =
      perturb
          ->add_option("--kinds", f.kinds,
                       "Kinds drawn with equal weight (default: insert, "
                       "delete, swap, split, merge)")
          ->check(KindsCheck());
  AddSeedJobs(perturb, f);
  perturb->add_option("-o,--output", f.output, "Output file, - for stdout")
      ->capture_default_str();

  CLI::App* serve = app.add_subcommand(
      "serve", "Serve a Naive Bayes model over HTTP until interrupted");
  serve->add_option("--model", f.model, "Model file from train-nb");
  serve->add_option("--corpus", f.corpus, "Train on this corpus instead");
  serve->add_option("--bind", f.bind, "host:port, port 0 picks a free one")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Streams io{in, out, err};
  absl::Status status;
  if (score->parsed()) {
    status = RunScore(f, io);
  } else if (train->parsed()) {
    status = RunTrainNb(f, io);
  } else if (attack->parsed()) {
    status = RunAttack(f, attack_kinds->count() > 0, io);
  } else if (evaluate->parsed()) {
    status = RunEvaluate(f, evaluate_kinds->count() > 0, io);
  } else if (perturb->parsed()) {
    status = RunPerturbDataset(f, perturb_kinds->count() > 0, io);
  } else if (serve->parsed()) {
    status = RunServe(f, io);
  }
  if (!status.ok()) {
    err << "error: " << status.message() << std::endl;
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace typostrike
