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

#ifndef CCSTOI_HARNESS_EVALUATE_H_
#define CCSTOI_HARNESS_EVALUATE_H_

#include <optional>
#include <string>
#include <vector>

#include "common/log.h"
#include "corpus/manifest.h"
#include "metrics/intelligibility.h"
#include "nn/mask_net.h"

namespace ccstoi {

// Which signal is scored against the clean reference. kClean scores the
// reference against itself.
enum class Condition { kNoisy, kEnhanced, kClean };

const char* ConditionName(Condition c);
Condition ParseCondition(const std::string& name);

struct UtteranceScore {
  std::string id;
  Condition condition = Condition::kNoisy;
  double stoi = 0.0;  // classic front end
  double cc_stoi = 0.0;
  double modified_stoi = 0.0;
  double sdi = 0.0;
  std::optional<double> pesq;
  // Mean of the PESQ, STOI and SDI columns that are present.
  double avg = 0.0;
};

struct ConditionAggregate {
  Condition condition = Condition::kNoisy;
  size_t count = 0;
  double stoi = 0.0;
  double cc_stoi = 0.0;
  double modified_stoi = 0.0;
  double sdi = 0.0;
  std::optional<double> pesq;  // over rows that have a score
  double avg = 0.0;
};

struct MetricReport {
  // Manifest order, then condition order.
  std::vector<UtteranceScore> rows;
  std::vector<ConditionAggregate> aggregates;
  std::vector<std::string> missing;  // utterance ids whose files are absent
  size_t considered = 0;             // entries in the evaluated split(s)
  std::string config_hash;           // of the checkpoint, if any
  std::string loss_label;            // training loss of the checkpoint

  // More than 10% of the considered entries were skipped.
  bool TooManyMissing() const;
};

struct EvalOptions {
  std::vector<Condition> conditions = {Condition::kNoisy};
  // Required for Condition::kEnhanced.
  const nn::MaskNet* net = nullptr;
  std::string config_hash;
  std::string loss_label;
  std::optional<Split> split;  // all entries when unset
  MetricConfig metric;
  // External scorer invoked as `<pesq_cmd> <clean.wav> <degraded.wav>`.
  std::string pesq_cmd;
  // Enhanced signals are written here as enhanced/<id>.wav when non-empty.
  std::string output_dir;
  int jobs = 1;
  LogFn log;
};

MetricReport Evaluate(const Manifest& manifest, const EvalOptions& options);

// Aligned text: a commented header, one row per utterance and condition, then
// one "mean" row per condition.
std::string FormatReportTable(const MetricReport& report);
// One JSON object per line: utterance rows, aggregate rows, missing entries.
std::string FormatReportJsonLines(const MetricReport& report);

// Runs `cmd clean degraded` and parses a number from the last non-empty line
// of its standard output. Returns nullopt on failure.
std::optional<double> RunPesq(const std::string& cmd, const std::string& clean,
                              const std::string& degraded);

}  // namespace ccstoi

#endif  // CCSTOI_HARNESS_EVALUATE_H_
