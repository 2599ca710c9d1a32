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

#include "typostrike/text.h"

#include <cstdint>
#include <fstream>
#include <locale>
#include <sstream>

#include <boost/locale/encoding_utf.hpp>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "string_view_compat.h"

namespace typostrike {
namespace {

constexpr std::string_view kEnglishStopWords =
#include "stopwords_en.inc"
    ;

// Character classification goes through the C.UTF-8 ctype facet so that
// non-ASCII letters lowercase correctly. Falls back to the classic locale
// (ASCII-only behavior) when C.UTF-8 is not installed.
const std::ctype<wchar_t>& WideCtype() {
  static const std::locale* const locale = [] {
    try {
      return new std::locale("C.UTF-8");
    } catch (const std::runtime_error&) {
      return new std::locale(std::locale::classic());
    }
  }();
  return std::use_facet<std::ctype<wchar_t>>(*locale);
}

}  // namespace

std::u32string DecodeUtf8(std::string_view utf8) {
  return boost::locale::conv::utf_to_utf<char32_t>(utf8.data(),
                                                   utf8.data() + utf8.size());
}

std::string EncodeUtf8(std::u32string_view text) {
  return boost::locale::conv::utf_to_utf<char>(text.data(),
                                               text.data() + text.size());
}

bool IsWhitespace(char32_t c) {
  switch (c) {
    case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
    case 0x0020: case 0x0085: case 0x00A0: case 0x1680: case 0x2028:
    case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool IsLetter(char32_t c) {
  if (c < 0x80) return absl::ascii_isalpha(static_cast<unsigned char>(c));
  return WideCtype().is(std::ctype_base::alpha, static_cast<wchar_t>(c));
}

bool IsAlphanumeric(char32_t c) {
  if (c < 0x80) return absl::ascii_isalnum(static_cast<unsigned char>(c));
  return WideCtype().is(std::ctype_base::alnum, static_cast<wchar_t>(c));
}

char32_t ToLower(char32_t c) {
  if (c < 0x80) return absl::ascii_tolower(static_cast<unsigned char>(c));
  return static_cast<char32_t>(WideCtype().tolower(static_cast<wchar_t>(c)));
}

std::u32string Normalize(std::u32string_view raw) {
  std::u32string out(raw);
  for (char32_t& c : out) c = ToLower(c);
  return out;
}

std::string Normalize(std::string_view raw_utf8) {
  return EncodeUtf8(Normalize(DecodeUtf8(raw_utf8)));
}

std::vector<WordSpan> TokenizeWords(std::u32string_view text) {
  std::vector<WordSpan> words;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsWhitespace(text[i])) ++i;
    if (i == text.size()) break;
    const size_t start = i;
    while (i < text.size() && !IsWhitespace(text[i])) ++i;
    words.push_back(
        WordSpan{std::u32string(text.substr(start, i - start)), start, i});
  }
  return words;
}

std::u32string StripPunctuation(std::u32string_view word) {
  size_t begin = 0;
  size_t end = word.size();
  while (begin < end && !IsAlphanumeric(word[begin])) ++begin;
  while (end > begin && !IsAlphanumeric(word[end - 1])) --end;
  return std::u32string(word.substr(begin, end - begin));
}

std::string ScoringKey(std::u32string_view word) {
  return EncodeUtf8(StripPunctuation(Normalize(word)));
}

StopWordSet::StopWordSet(Words words) : words_(std::move(words)) {}

const StopWordSet& StopWordSet::English() {
  static const StopWordSet* const english = [] {
    absl::StatusOr<StopWordSet> parsed = Parse(kEnglishStopWords);
    return new StopWordSet(parsed.ok() ? *std::move(parsed) : StopWordSet());
  }();
  return *english;
}

absl::StatusOr<StopWordSet> StopWordSet::Parse(std::string_view contents) {
  Words words;
  int line_number = 0;
  for (const absl::string_view piece : absl::StrSplit(Absl(contents), '\n')) {
    std::string_view line = Std(piece);
    ++line_number;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::u32string entry = Normalize(DecodeUtf8(line));
    const std::vector<WordSpan> parts = TokenizeWords(entry);
    if (parts.empty()) continue;
    if (parts.size() > 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          "stop-word entry on line ", line_number, " contains whitespace"));
    }
    words.insert(EncodeUtf8(parts.front().text));
  }
  return StopWordSet(std::move(words));
}

absl::StatusOr<StopWordSet> StopWordSet::Load(const std::string& path) {
  absl::StatusOr<std::string> contents = ReadFile(path);
  if (!contents.ok()) return contents.status();
  return Parse(*contents);
}

bool StopWordSet::Contains(std::string_view word) const {
  return words_.find(word) != words_.end();
}

std::string StopWordSet::Fingerprint() const {
  std::string joined;
  for (const std::string& w : words_) absl::StrAppend(&joined, w, "\n");
  return Fnv1aHex(joined);
}

std::string Fnv1aHex(std::string_view data) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return absl::StrFormat("%016x", hash);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("cannot read ", path));
  return buffer.str();
}

}  // namespace typostrike
