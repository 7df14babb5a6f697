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

#ifndef CCSTOI_COMMON_CONFIG_H_
#define CCSTOI_COMMON_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>

namespace ccstoi {

// Flat key=value settings. Text form: one `key=value` per line, blank lines
// and lines starting with '#' ignored, surrounding whitespace trimmed.
// Serialization orders keys lexicographically so equal configs produce
// identical bytes.
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(const std::string& text);
  static KeyValueConfig Load(const std::string& path);

  std::string Serialize() const;

  void Set(const std::string& key, const std::string& value);
  void Set(const std::string& key, double value);
  void Set(const std::string& key, int64_t value);
  void Set(const std::string& key, int value) {
    Set(key, static_cast<int64_t>(value));
  }
  bool Has(const std::string& key) const;
  void Erase(const std::string& key);

  std::string GetString(const std::string& key, const std::string& fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  int64_t GetInt(const std::string& key, int64_t fallback) const;

  // Copies every entry of `other`, overwriting duplicates.
  void Merge(const KeyValueConfig& other);

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

// 64-bit FNV-1a.
uint64_t Fnv1a64(const std::string& data);

}  // namespace ccstoi

#endif  // CCSTOI_COMMON_CONFIG_H_
