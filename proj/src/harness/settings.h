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

#ifndef CCSTOI_HARNESS_SETTINGS_H_
#define CCSTOI_HARNESS_SETTINGS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "common/config.h"
#include "corpus/manifest.h"
#include "metrics/intelligibility.h"
#include "nn/mask_net.h"
#include "nn/trainer.h"

namespace ccstoi {

// Every tunable of the toolkit, read from a key=value file. Keys are grouped
// by prefix: stft.*, metric.*, net.*, train.*, corpus.*, eval.* plus seed.
struct Settings {
  uint64_t seed = 0;
  MetricConfig metric;
  nn::MaskNetConfig net;
  nn::TrainOptions train;
  std::vector<double> snr_grid = {0.0};
  SplitSpec split;
  std::string pesq_cmd;

  // Throws kConfig on unknown keys or malformed values.
  static Settings FromConfig(const KeyValueConfig& cfg);
  KeyValueConfig ToConfig() const;
};

// Comma-separated list helpers used by the corpus.* keys. A grid may also be
// given as "speech" or "nonspeech".
std::vector<double> ParseSnrGrid(const std::string& text);
std::vector<std::string> SplitList(const std::string& text);
std::string JoinList(const std::vector<std::string>& items);

}  // namespace ccstoi

#endif  // CCSTOI_HARNESS_SETTINGS_H_
