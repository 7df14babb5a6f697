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

#ifndef CCSTOI_SIGNAL_RESAMPLE_H_
#define CCSTOI_SIGNAL_RESAMPLE_H_

#include "signal/waveform.h"

namespace ccstoi {

// Rational-ratio polyphase resampler with a Kaiser-windowed sinc (beta 8).
// The anti-aliasing cutoff sits at 0.95 of the lower Nyquist frequency and
// the output length is round(len * target_rate / sample_rate).
Waveform Resample(const Waveform& wave, int target_rate);

}  // namespace ccstoi

#endif  // CCSTOI_SIGNAL_RESAMPLE_H_
