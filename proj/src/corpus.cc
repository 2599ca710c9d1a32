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

#include "typostrike/corpus.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "typostrike/text.h"
#include "string_view_compat.h"

namespace typostrike {

using json = nlohmann::json;

absl::StatusOr<LabeledCorpus> LabeledCorpus::Create(
    std::vector<std::string> class_names, std::vector<Sample> samples) {
  if (class_names.size() < 2) {
    return absl::InvalidArgumentError("a corpus needs at least two classes");
  }
  for (size_t i = 0; i < samples.size(); ++i) {
    const int label = samples[i].label;
    if (label < 0 || label >= static_cast<int>(class_names.size())) {
      return absl::InvalidArgumentError(
          absl::StrCat("sample ", i, " has label ", label, " outside [0, ",
                       class_names.size(), ")"));
    }
  }
  return LabeledCorpus(std::move(class_names), std::move(samples));
}

absl::StatusOr<LabeledCorpus> LabeledCorpus::ParseJsonl(
    std::string_view contents) {
  std::vector<std::string> class_names;
  bool have_header = false;
  std::vector<Sample> samples;
  int max_label = -1;
  int line_number = 0;
  for (const absl::string_view piece : absl::StrSplit(Absl(contents), '\n')) {
    std::string_view line = Std(piece);
    ++line_number;
    line = Std(absl::StripAsciiWhitespace(Absl(line)));
    if (line.empty()) continue;
    const json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": not a JSON object"));
    }
    if (record.contains("classes")) {
      if (have_header || !samples.empty()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_number, ": classes header must come first"));
      }
      const json& classes = record["classes"];
      if (!classes.is_array()) {
        return absl::InvalidArgumentError("`classes` must be an array");
      }
      for (const json& name : classes) {
        if (!name.is_string()) {
          return absl::InvalidArgumentError("class names must be strings");
        }
        class_names.push_back(name.get<std::string>());
      }
      have_header = true;
      continue;
    }
    const auto text = record.find("text");
    const auto label = record.find("label");
    if (text == record.end() || !text->is_string() || label == record.end() ||
        !label->is_number_integer()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": expected {\"text\": str, \"label\": int}"));
    }
    samples.push_back(Sample{text->get<std::string>(), label->get<int>()});
    max_label = std::max(max_label, samples.back().label);
  }
  if (!have_header) {
    for (int i = 0; i <= max_label; ++i) class_names.push_back(absl::StrCat(i));
  }
  return Create(std::move(class_names), std::move(samples));
}

absl::StatusOr<LabeledCorpus> LabeledCorpus::LoadJsonl(
    const std::string& path) {
  absl::StatusOr<std::string> contents = ReadFile(path);
  if (!contents.ok()) return contents.status();
  absl::StatusOr<LabeledCorpus> corpus = ParseJsonl(*contents);
  if (!corpus.ok()) {
    return absl::Status(corpus.status().code(),
                        absl::StrCat(path, ": ", corpus.status().message()));
  }
  return corpus;
}

std::string LabeledCorpus::ToJsonl() const {
  std::string out = json{{"classes", class_names_}}.dump();
  out += '\n';
  for (const Sample& s : samples_) {
    out += json{{"label", s.label}, {"text", s.text}}.dump();
    out += '\n';
  }
  return out;
}

absl::Status LabeledCorpus::CheckEveryClassPresent() const {
  std::vector<bool> seen(class_names_.size(), false);
  for (const Sample& s : samples_) seen[s.label] = true;
  for (size_t c = 0; c < seen.size(); ++c) {
    if (!seen[c]) {
      return absl::FailedPreconditionError(
          absl::StrCat("class '", class_names_[c], "' has no samples"));
    }
  }
  return absl::OkStatus();
}

std::string LabeledCorpus::Fingerprint() const { return Fnv1aHex(ToJsonl()); }

}  // namespace typostrike
