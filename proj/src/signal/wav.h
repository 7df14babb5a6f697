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

#ifndef CCSTOI_SIGNAL_WAV_H_
#define CCSTOI_SIGNAL_WAV_H_

#include <string>

#include "signal/waveform.h"

namespace ccstoi {

// Reads a RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float samples.
// Multi-channel audio is averaged to mono. PCM samples are scaled by 1/32768.
Waveform ReadWav(const std::string& path);

// Writes 16-bit PCM. Samples are rounded to the nearest step and clamped to
// the representable range; non-finite samples are rejected.
void WriteWav(const Waveform& wave, const std::string& path);

}  // namespace ccstoi

#endif  // CCSTOI_SIGNAL_WAV_H_
