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

#include "wikistance/common.h"

#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace wikistance {

std::string_view language_code(Language lang) {
  switch (lang) {
    case Language::kEn: return "en";
    case Language::kDe: return "de";
    case Language::kTr: return "tr";
  }
  return "en";
}

std::optional<Language> parse_language(std::string_view code) {
  if (code == "en") return Language::kEn;
  if (code == "de") return Language::kDe;
  if (code == "tr") return Language::kTr;
  return std::nullopt;
}

Json Error::to_json() const {
  const char *kind = "data";
  if (kind_ == ErrorKind::kConfig) kind = "config";
  if (kind_ == ErrorKind::kNetwork) kind = "network";
  return Json{{"error", code_}, {"kind", kind}, {"message", what()}};
}

void throw_error(ErrorKind kind, std::string code, const std::string &message) {
  throw Error(kind, std::move(code), message);
}

namespace {

std::mutex sink_mu;
DiagnosticSink current_sink;

void default_sink(const Json &record) {
  std::string line =
      record.dump(-1, ' ', false, Json::error_handler_t::replace) + "\n";
  std::fwrite(line.data(), 1, line.size(), stderr);
}

}  // namespace

DiagnosticSink set_diagnostic_sink(DiagnosticSink sink) {
  std::lock_guard<std::mutex> lock(sink_mu);
  DiagnosticSink previous = std::move(current_sink);
  current_sink = std::move(sink);
  return previous;
}

void emit_diagnostic(const std::string &level, const std::string &code,
                     Json fields) {
  Json record = Json::object();
  record["level"] = level;
  record["code"] = code;
  for (auto &[key, value] : fields.items()) record[key] = value;
  std::lock_guard<std::mutex> lock(sink_mu);
  if (current_sink) {
    current_sink(record);
  } else {
    default_sink(record);
  }
}

ScopedDiagnosticCapture::ScopedDiagnosticCapture() {
  previous_ = set_diagnostic_sink(
      [this](const Json &record) { records_.push_back(record); });
}

ScopedDiagnosticCapture::~ScopedDiagnosticCapture() {
  set_diagnostic_sink(std::move(previous_));
}

size_t ScopedDiagnosticCapture::count(std::string_view code) const {
  size_t n = 0;
  for (const Json &r : records_) {
    if (r.value("code", "") == code) ++n;
  }
  return n;
}

uint64_t fnv1a64(std::string_view data) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(uint64_t value) {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string data_dir() {
  if (const char *env = std::getenv("WIKISTANCE_DATA"); env && *env) {
    return env;
  }
  return WIKISTANCE_DATA_DIR;
}

}  // namespace wikistance
