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

#ifndef WHATIF_FORMAT_H_
#define WHATIF_FORMAT_H_

#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fmt/format.h"

namespace whatif {

// Concatenates the fmt "{}" rendering of each argument.
template <typename... Args>
void StrAppend(std::string* out, const Args&... args) {
  (fmt::format_to(std::back_inserter(*out), "{}", args), ...);
}

template <typename... Args>
std::string StrCat(const Args&... args) {
  std::string out;
  StrAppend(&out, args...);
  return out;
}

template <typename Range>
std::string StrJoin(const Range& range, std::string_view sep) {
  return fmt::format("{}", fmt::join(range, sep));
}

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);

// Strict full-string parses; whitespace around the value is not accepted.
std::optional<double> ParseDouble(std::string_view text);
std::optional<long long> ParseInt(std::string_view text);

// Splits into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> SplitLines(std::string_view text);

// Splits on `sep`, keeping empty fields.
std::vector<std::string_view> Split(std::string_view text, char sep);

std::string_view StripWhitespace(std::string_view text);
std::string ToLower(std::string_view text);

// Same status code with "prefix: " prepended to the message.
absl::Status Annotate(const absl::Status& status, std::string_view prefix);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

}  // namespace whatif

#endif  // WHATIF_FORMAT_H_
