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

#ifndef CCSTOI_HARNESS_SCATTER_H_
#define CCSTOI_HARNESS_SCATTER_H_

#include <optional>
#include <string>
#include <vector>

#include "harness/evaluate.h"

namespace ccstoi {

struct ScatterPoint {
  double cc_stoi = 0.0;
  double modified_stoi = 0.0;
  std::string id;
  Condition condition = Condition::kNoisy;
};

struct ScatterData {
  std::vector<ScatterPoint> points;
  // Unset when either coordinate has zero variance.
  std::optional<double> pearson_r;
  std::string config_hash;
};

// Sample Pearson correlation; nullopt for fewer than two points or a constant
// coordinate.
std::optional<double> PearsonR(const std::vector<double>& x,
                               const std::vector<double>& y);

ScatterData ScatterFromReport(const MetricReport& report);

// Evaluates the requested conditions and pairs each utterance's CC-STOI with
// its modified STOI. Throws kInvalidArgument with fewer than two points.
ScatterData Scatter(const Manifest& manifest, const EvalOptions& options);

// Commented header (condition set, point count, r, checkpoint hash), a column
// header line, then "cc_stoi modified_stoi" pairs at full precision.
std::string FormatScatter(const ScatterData& data);
// Reads the two numeric columns back; ids and conditions are not stored.
ScatterData ParseScatter(const std::string& text);

}  // namespace ccstoi

#endif  // CCSTOI_HARNESS_SCATTER_H_
