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

// Some abseil builds keep their own string_view type instead of aliasing
// std::string_view. These adapters work with either.

#ifndef TYPOSTRIKE_STRING_VIEW_COMPAT_H_
#define TYPOSTRIKE_STRING_VIEW_COMPAT_H_

#include <string_view>

#include "absl/strings/string_view.h"

namespace typostrike {

inline absl::string_view Absl(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

inline std::string_view Std(absl::string_view s) {
  return std::string_view(s.data(), s.size());
}

}  // namespace typostrike

#endif  // TYPOSTRIKE_STRING_VIEW_COMPAT_H_
