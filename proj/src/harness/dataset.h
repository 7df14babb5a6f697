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

#ifndef CCSTOI_HARNESS_DATASET_H_
#define CCSTOI_HARNESS_DATASET_H_

#include <optional>
#include <vector>

#include "common/log.h"
#include "corpus/manifest.h"
#include "nn/trainer.h"
#include "signal/waveform.h"
#include "spectral/stft.h"

namespace ccstoi {

inline constexpr int kModelRate = 16000;

struct WavePair {
  Waveform clean;
  Waveform noisy;
};

// Reads an entry's clean/noisy files, resampling to 16 kHz (with a warning)
// when needed. Throws kShape if the two lengths differ.
WavePair LoadPair(const Manifest& manifest, const ManifestEntry& entry,
                  const LogFn& log = {});

nn::TrainingExample MakeExample(const std::string& id, const WavePair& pair,
                                const StftConfig& stft);

// Examples for every entry of `split`, in manifest order.
std::vector<nn::TrainingExample> LoadExamples(const Manifest& manifest,
                                              Split split,
                                              const StftConfig& stft,
                                              const LogFn& log = {});

}  // namespace ccstoi

#endif  // CCSTOI_HARNESS_DATASET_H_
