// Copyright 2026 The Wikistance Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WIKISTANCE_COMMON_H_
#define WIKISTANCE_COMMON_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace wikistance {

using Json = nlohmann::json;

enum class Language { kEn, kDe, kTr };

inline constexpr std::array<Language, 3> kAllLanguages = {
    Language::kEn, Language::kDe, Language::kTr};

std::string_view language_code(Language lang);

// Parses "en", "de" or "tr". Returns nullopt for anything else.
std::optional<Language> parse_language(std::string_view code);

// Broad error classes. They map one-to-one onto CLI exit codes.
enum class ErrorKind {
  kConfig,   // exit 2
  kData,     // exit 3
  kNetwork,  // exit 4
};

// All library failures are reported with this exception. The code is the
// stable machine-readable name (e.g. "SchemaViolation", "CycleDetected").
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string &message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  const std::string &code() const { return code_; }

  Json to_json() const;

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] void throw_error(ErrorKind kind, std::string code,
                              const std::string &message);

// Structured diagnostics. Records are JSON objects with at least "level" and
// "code"; the default sink writes them as JSON lines on stderr.
using DiagnosticSink = std::function<void(const Json &)>;

// Installs a sink and returns the previous one. Passing an empty function
// restores the default stderr sink.
DiagnosticSink set_diagnostic_sink(DiagnosticSink sink);
void emit_diagnostic(const std::string &level, const std::string &code,
                     Json fields = Json::object());

// Captures diagnostics for the lifetime of the object (tests, lint).
class ScopedDiagnosticCapture {
 public:
  ScopedDiagnosticCapture();
  ~ScopedDiagnosticCapture();
  ScopedDiagnosticCapture(const ScopedDiagnosticCapture &) = delete;
  ScopedDiagnosticCapture &operator=(const ScopedDiagnosticCapture &) = delete;

  const std::vector<Json> &records() const { return records_; }
  size_t count(std::string_view code) const;

 private:
  std::vector<Json> records_;
  DiagnosticSink previous_;
};

// Directory holding lexicons, curation files and topic overrides:
// $WIKISTANCE_DATA if set, else the source tree's data/ directory.
std::string data_dir();

// 64-bit FNV-1a. Used for stable record ids and split ordering.
uint64_t fnv1a64(std::string_view data);
std::string hex64(uint64_t value);

}  // namespace wikistance

#endif  // WIKISTANCE_COMMON_H_
