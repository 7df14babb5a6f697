// Copyright 2026 The CC-STOI Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "common/config.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "common/error.h"

namespace ccstoi {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::Parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kConfig,
           "config line " + std::to_string(number) + " has no '='");
    }
    const std::string key = Trim(trimmed.substr(0, eq));
    if (key.empty()) {
      Fail(ErrorCode::kConfig,
           "config line " + std::to_string(number) + " has an empty key");
    }
    cfg.entries_[key] = Trim(trimmed.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return Parse(text.str());
}

std::string KeyValueConfig::Serialize() const {
  std::string out;
  for (const auto& [key, value] : entries_) out += key + "=" + value + "\n";
  return out;
}

void KeyValueConfig::Set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

void KeyValueConfig::Set(const std::string& key, double value) {
  entries_[key] = FormatDouble(value);
}

void KeyValueConfig::Set(const std::string& key, int64_t value) {
  entries_[key] = std::to_string(value);
}

bool KeyValueConfig::Has(const std::string& key) const {
  return entries_.count(key) > 0;
}

void KeyValueConfig::Erase(const std::string& key) { entries_.erase(key); }

std::string KeyValueConfig::GetString(const std::string& key,
                                      const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KeyValueConfig::GetDouble(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const char* begin = it->second.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    Fail(ErrorCode::kConfig,
         "config key '" + key + "' is not a number: '" + it->second + "'");
  }
  return v;
}

int64_t KeyValueConfig::GetInt(const std::string& key, int64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const char* begin = it->second.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    Fail(ErrorCode::kConfig,
         "config key '" + key + "' is not an integer: '" + it->second + "'");
  }
  return v;
}

void KeyValueConfig::Merge(const KeyValueConfig& other) {
  for (const auto& [key, value] : other.entries_) entries_[key] = value;
}

std::string FormatDouble(double value) {
  char buf[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

uint64_t Fnv1a64(const std::string& data) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace ccstoi
