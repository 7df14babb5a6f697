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

#ifndef CCSTOI_HARNESS_ENHANCE_H_
#define CCSTOI_HARNESS_ENHANCE_H_

#include "common/log.h"
#include "nn/mask_net.h"
#include "signal/waveform.h"
#include "spectral/stft.h"

namespace ccstoi {

// Masks the noisy magnitude and resynthesizes with the noisy phase. Input at
// another rate is resampled to 16 kHz first (with a warning); the output has
// exactly as many samples as the 16 kHz input. Frames start at sample 0, as
// in training and in the metrics; the tail is zero-padded so the last frame
// covers the final samples. Empty input throws kTooShort.
Waveform EnhanceWaveform(const nn::MaskNet& net, const Waveform& noisy,
                         const StftConfig& stft = DefaultStftConfig(),
                         const LogFn& log = {});

}  // namespace ccstoi

#endif  // CCSTOI_HARNESS_ENHANCE_H_
