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

#ifndef CCSTOI_CORPUS_MIX_H_
#define CCSTOI_CORPUS_MIX_H_

#include <cstdint>
#include <vector>

#include "signal/waveform.h"

namespace ccstoi {

struct MixResult {
  Waveform mixture;
  // The two additive components after gain and joint peak scaling:
  // mixture = clean + noise exactly (up to rounding).
  Waveform clean;
  Waveform noise;
  double gain = 1.0;   // applied to the raw noise segment before scaling
  double scale = 1.0;  // joint peak-normalization factor (<= 1)
  size_t offset = 0;   // start of the noise segment within the noise file
};

// Adds `noise` to `clean` at `snr_db`, with SNR measured over the whole
// utterance. The noise segment starts at a seeded offset and wraps around
// when the noise is shorter than the clean signal. If the mixture peak
// exceeds full scale, clean and noise are scaled down together.
MixResult MixAtSnr(const Waveform& clean, const Waveform& noise, double snr_db,
                   uint64_t seed);

// 10 log10(sum clean^2 / sum (mixture - clean)^2).
double RealizedSnrDb(const Waveform& clean, const Waveform& mixture);

// Speech babble: 0 to 20 dB in 5 dB steps.
std::vector<double> SnrGridSpeech();
// Non-speech noise: -12 to 9 dB in 3 dB steps.
std::vector<double> SnrGridNonSpeech();

}  // namespace ccstoi

#endif  // CCSTOI_CORPUS_MIX_H_
