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

#ifndef CCSTOI_SIGNAL_SYNTHETIC_H_
#define CCSTOI_SIGNAL_SYNTHETIC_H_

#include <cstdint>

#include "signal/waveform.h"

namespace ccstoi {

// Deterministic speech-like test signal: a harmonic source with a gliding f0
// in [90, 250] Hz, shaped by three slowly moving formant resonators and gated
// by a syllable-rate voiced / unvoiced / pause envelope. Peak amplitude 0.5.
// Output length is round(duration_s * rate).
Waveform SyntheticSpeech(double duration_s, uint64_t seed, int rate = 16000);

// Zero-mean Gaussian noise with unit variance, scaled by `stddev`.
Waveform WhiteNoise(double duration_s, uint64_t seed, int rate = 16000,
                    double stddev = 0.1);

}  // namespace ccstoi

#endif  // CCSTOI_SIGNAL_SYNTHETIC_H_
