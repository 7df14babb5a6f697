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

#include "harness/enhance.h"

#include <algorithm>

#include "common/error.h"
#include "harness/dataset.h"
#include "signal/resample.h"

namespace ccstoi {

Waveform EnhanceWaveform(const nn::MaskNet& net, const Waveform& noisy,
                         const StftConfig& stft, const LogFn& log) {
  stft.Validate();
  Require(!noisy.empty(), ErrorCode::kTooShort, "cannot enhance an empty signal");
  Waveform input = noisy;
  if (input.sample_rate != kModelRate) {
    Log(log, LogLevel::kWarning,
        "input is " + std::to_string(input.sample_rate) +
            " Hz; resampling to 16000 Hz");
    input = Resample(input, kModelRate);
    Require(!input.empty(), ErrorCode::kTooShort, "resampled signal is empty");
  }
  const size_t n = input.size();
  const size_t hop = stft.hop;
  size_t total = std::max(n, static_cast<size_t>(stft.frame_len));
  const size_t rem = (total - stft.frame_len) % hop;
  if (rem) total += hop - rem;

  Waveform padded = input;
  padded.samples.resize(total, 0.0);

  const Spectrogram spec = Stft(padded, stft);
  const nn::MaskNet::Output out = net.Forward(spec.Magnitude());
  Waveform result = Istft(Recombine(out.enhanced, spec));
  result.sample_rate = kModelRate;
  result.samples.resize(n);
  return result;
}

}  // namespace ccstoi
