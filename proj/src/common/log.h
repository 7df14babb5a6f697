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

#ifndef CCSTOI_COMMON_LOG_H_
#define CCSTOI_COMMON_LOG_H_

#include <functional>
#include <string>

namespace ccstoi {

enum class LogLevel { kInfo = 0, kWarning = 1 };

// Optional sink for progress and warning messages. An empty function drops
// everything.
using LogFn = std::function<void(LogLevel, const std::string&)>;

inline void Log(const LogFn& sink, LogLevel level, const std::string& msg) {
  if (sink) sink(level, msg);
}

}  // namespace ccstoi

#endif  // CCSTOI_COMMON_LOG_H_
