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

// The `typostrike` command line.
//
//   typostrike score            word score table from a labeled corpus
//   typostrike train-nb         Naive Bayes victim model from a labeled corpus
//   typostrike attack           attack texts, one outcome JSON line each
//   typostrike evaluate         budget-grid experiment with report files
//   typostrike perturb-dataset  boundary-labeled augmentation data
//   typostrike serve            expose a model over HTTP
//
// Any flag can also come from `--config FILE`, a TOML document with one
// section per subcommand whose keys are the long flag names. Flags on the
// command line win. Exit codes: 0 success, 1 failure while running, 2 bad
// usage.

#ifndef TYPOSTRIKE_CLI_H_
#define TYPOSTRIKE_CLI_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace typostrike {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err);

// Expands a list of integers and inclusive ranges such as {"1-4", "10"}.
absl::StatusOr<std::vector<int>> ParseIntGrid(
    const std::vector<std::string>& items);

}  // namespace typostrike

#endif  // TYPOSTRIKE_CLI_H_
