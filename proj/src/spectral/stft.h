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

#ifndef CCSTOI_SPECTRAL_STFT_H_
#define CCSTOI_SPECTRAL_STFT_H_

#include <Eigen/Dense>
#include <vector>

#include "signal/waveform.h"

namespace ccstoi {

enum class WindowKind { kHann };

struct StftConfig {
  int frame_len = 512;
  int hop = 256;
  int fft_len = 512;
  WindowKind window = WindowKind::kHann;

  int num_bins() const { return fft_len / 2 + 1; }
  // Throws kConfig unless 0 < hop <= frame_len <= fft_len and fft_len is a
  // power of two.
  void Validate() const;
};

// 32 ms frames with 50% overlap at 16 kHz.
StftConfig DefaultStftConfig();
// The 10 kHz front end of classic STOI: 256-sample frames, hop 128, FFT 512.
StftConfig ClassicStoiStftConfig();

// Symmetric Hann window, w[n] = 0.5 - 0.5 cos(2 pi n / (len - 1)).
std::vector<double> HannWindow(int len);

// One-sided complex STFT. Rows are frequency bins (F = fft_len / 2 + 1),
// columns are frames (T).
struct Spectrogram {
  Eigen::MatrixXcd bins;
  StftConfig config;
  int origin_rate = 16000;

  Eigen::Index num_bins() const { return bins.rows(); }
  Eigen::Index num_frames() const { return bins.cols(); }
  Eigen::MatrixXd Magnitude() const { return bins.cwiseAbs(); }
  Eigen::MatrixXd Phase() const;
};

// Number of whole frames that fit in `length` samples.
int NumFrames(size_t length, const StftConfig& cfg);

// Frame t covers samples [t * hop, t * hop + frame_len), Hann-windowed and
// zero-padded to fft_len. Throws kTooShort if the waveform is shorter than
// one frame.
Spectrogram Stft(const Waveform& wave, const StftConfig& cfg);

// Weighted overlap-add: each synthesis frame is windowed again and the sum is
// divided by the overlapped squared window (floored at 1% of its peak, which
// only affects the first and last few samples). Output length is
// (T - 1) * hop + frame_len; samples with no window support are zero.
Waveform Istft(const Spectrogram& spec);

// magnitude * exp(i * angle(phase_source)); throws kShape on mismatch.
Spectrogram Recombine(const Eigen::MatrixXd& magnitude,
                      const Spectrogram& phase_source);

}  // namespace ccstoi

#endif  // CCSTOI_SPECTRAL_STFT_H_
