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

#ifndef CCSTOI_COMMON_ERROR_H_
#define CCSTOI_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace ccstoi {

// Failure categories shared by every module. The C API maps these one-to-one
// onto ccstoi_status values.
enum class ErrorCode {
  kInvalidArgument = 1,
  kFormat,
  kUnsupportedFormat,
  kShape,
  kTooShort,
  kEmptySignal,
  kConfig,
  kSplit,
  kDegenerateNoise,
  kNumeric,
  kIo,
  kUndefinedMetric,
  kCheckFailed,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) Fail(code, message);
}

}  // namespace ccstoi

#endif  // CCSTOI_COMMON_ERROR_H_
