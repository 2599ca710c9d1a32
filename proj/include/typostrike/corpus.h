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

#ifndef TYPOSTRIKE_CORPUS_H_
#define TYPOSTRIKE_CORPUS_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace typostrike {

struct Sample {
  std::string text;  // UTF-8, as read; not normalized.
  int label = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Class-labeled text samples.
//
// On-disk form is JSON-lines, one `{"text": "...", "label": <int>}` object
// per line, optionally preceded by a `{"classes": ["neg", "pos"]}` header.
// Without a header the classes are named "0" .. "k-1" where k is one more
// than the largest label seen.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;

  // Requires at least two classes and every label in range.
  static absl::StatusOr<LabeledCorpus> Create(
      std::vector<std::string> class_names, std::vector<Sample> samples);

  static absl::StatusOr<LabeledCorpus> ParseJsonl(std::string_view contents);
  static absl::StatusOr<LabeledCorpus> LoadJsonl(const std::string& path);

  // Always emits the classes header.
  std::string ToJsonl() const;

  // Fails unless every class has at least one sample. Training routines
  // call this; subsamples used only for evaluation need not cover every
  // class.
  absl::Status CheckEveryClassPresent() const;

  std::string Fingerprint() const;

  int num_classes() const { return static_cast<int>(class_names_.size()); }
  const std::vector<std::string>& class_names() const { return class_names_; }
  const std::vector<Sample>& samples() const { return samples_; }
  size_t size() const { return samples_.size(); }

 private:
  LabeledCorpus(std::vector<std::string> class_names,
                std::vector<Sample> samples)
      : class_names_(std::move(class_names)), samples_(std::move(samples)) {}

  std::vector<std::string> class_names_;
  std::vector<Sample> samples_;
};

}  // namespace typostrike

#endif  // TYPOSTRIKE_CORPUS_H_
