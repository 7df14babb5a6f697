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

#ifndef CCSTOI_OCTAVE_OCTAVE_BANDS_H_
#define CCSTOI_OCTAVE_OCTAVE_BANDS_H_

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "signal/waveform.h"
#include "spectral/stft.h"

namespace ccstoi {

inline constexpr int kNumBands = 15;
inline constexpr double kLowestCenterHz = 150.0;
inline constexpr int kDefaultSegmentFrames = 30;
inline constexpr double kDefaultSilenceDb = 40.0;

// Rectangular one-third-octave filterbank over one-sided STFT bins.
struct OctaveBandMatrix {
  Eigen::MatrixXd weights;  // kNumBands x F, entries in {0, 1}
  std::vector<double> center_freqs;
  // Half-open bin range [first, last) of each band.
  std::vector<std::pair<int, int>> bin_ranges;

  int band_count() const { return static_cast<int>(center_freqs.size()); }
  int num_bins() const { return static_cast<int>(weights.cols()); }
};

// Band k is centered at 150 * 2^(k/3) Hz with edges at 2^(-1/6) and 2^(1/6)
// of the center. A bin belongs to band k when its center frequency lies in
// [lower, upper); bands reaching past Nyquist are truncated there. Throws
// kConfig if any of the 15 bands ends up without a bin.
OctaveBandMatrix BuildBandMatrix(int rate, int fft_len);

// envelope(i, t) = sqrt(sum over bins f in band i of mag(f, t)^2).
Eigen::MatrixXd BandEnvelopes(const Eigen::MatrixXd& magnitude,
                              const OctaveBandMatrix& bands);

// Sliding length-N windows over band envelopes, stride 1. Segment j of band i
// covers frames [j, j + N).
class EnvelopeSegments {
 public:
  EnvelopeSegments(Eigen::MatrixXd envelopes, int segment_len);

  int num_bands() const { return static_cast<int>(envelopes_.rows()); }
  int num_frames() const { return static_cast<int>(envelopes_.cols()); }
  int segment_len() const { return segment_len_; }
  int num_segments() const { return num_frames() - segment_len_ + 1; }

  auto segment(int band, int j) const {
    return envelopes_.row(band).segment(j, segment_len_);
  }
  const Eigen::MatrixXd& envelopes() const { return envelopes_; }

 private:
  Eigen::MatrixXd envelopes_;
  int segment_len_;
};

// Throws kTooShort when there are fewer frames than `segment_len`.
EnvelopeSegments Segment(const Eigen::MatrixXd& envelopes, int segment_len);

struct SilenceRemovalResult {
  Waveform clean;
  std::vector<Waveform> others;
  int frames_kept = 0;
  int frames_total = 0;
};

// Drops frames whose clean-signal energy lies more than `threshold_db` below
// the loudest clean frame, from the clean signal and from every companion at
// the same positions. Survivors are overlap-added with a Hann window that
// sums to one at 50% overlap, normalized by the overlapped window. An
// infinite threshold returns the inputs unchanged.
SilenceRemovalResult RemoveSilentFrames(const Waveform& clean,
                                        const std::vector<Waveform>& others,
                                        const StftConfig& cfg,
                                        double threshold_db = kDefaultSilenceDb);

}  // namespace ccstoi

#endif  // CCSTOI_OCTAVE_OCTAVE_BANDS_H_
