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

#include "octave/octave_bands.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "common/error.h"

namespace ccstoi {

OctaveBandMatrix BuildBandMatrix(int rate, int fft_len) {
  Require(rate > 0 && fft_len > 0, ErrorCode::kConfig,
          "rate and fft length must be positive");
  const int bins = fft_len / 2 + 1;
  const double spacing = static_cast<double>(rate) / fft_len;
  const double nyquist = 0.5 * rate;

  OctaveBandMatrix m;
  m.weights = Eigen::MatrixXd::Zero(kNumBands, bins);
  for (int k = 0; k < kNumBands; ++k) {
    const double center = kLowestCenterHz * std::pow(2.0, k / 3.0);
    const double lower = center * std::pow(2.0, -1.0 / 6.0);
    const double upper = std::min(center * std::pow(2.0, 1.0 / 6.0), nyquist);
    int first = bins, last = 0;
    for (int f = 0; f < bins; ++f) {
      const double freq = f * spacing;
      // The Nyquist bin is assigned when a band is truncated at Nyquist.
      const bool inside = freq >= lower && (freq < upper || (upper == nyquist &&
                                                             freq == nyquist));
      if (inside) {
        m.weights(k, f) = 1.0;
        first = std::min(first, f);
        last = std::max(last, f + 1);
      }
    }
    if (first >= last) {
      Fail(ErrorCode::kConfig,
           "one-third-octave band " + std::to_string(k) + " (" +
               std::to_string(center) + " Hz) contains no bin at rate " +
               std::to_string(rate) + " / fft " + std::to_string(fft_len));
    }
    m.center_freqs.push_back(center);
    m.bin_ranges.emplace_back(first, last);
  }
  return m;
}

Eigen::MatrixXd BandEnvelopes(const Eigen::MatrixXd& magnitude,
                              const OctaveBandMatrix& bands) {
  Require(magnitude.rows() == bands.num_bins(), ErrorCode::kShape,
          "magnitude has " + std::to_string(magnitude.rows()) +
              " bins, band matrix expects " + std::to_string(bands.num_bins()));
  return (bands.weights * magnitude.cwiseAbs2()).cwiseSqrt();
}

EnvelopeSegments::EnvelopeSegments(Eigen::MatrixXd envelopes, int segment_len)
    : envelopes_(std::move(envelopes)), segment_len_(segment_len) {}

EnvelopeSegments Segment(const Eigen::MatrixXd& envelopes, int segment_len) {
  Require(segment_len >= 1, ErrorCode::kInvalidArgument,
          "segment length must be positive");
  Require(envelopes.cols() >= segment_len, ErrorCode::kTooShort,
          std::to_string(envelopes.cols()) + " frames cannot hold a " +
              std::to_string(segment_len) + "-frame segment");
  return EnvelopeSegments(envelopes, segment_len);
}

SilenceRemovalResult RemoveSilentFrames(const Waveform& clean,
                                        const std::vector<Waveform>& others,
                                        const StftConfig& cfg,
                                        double threshold_db) {
  for (const Waveform& w : others) {
    Require(w.size() == clean.size(), ErrorCode::kShape,
            "companion signals must match the clean length");
  }
  SilenceRemovalResult result;
  if (std::isinf(threshold_db) && threshold_db > 0) {
    result.clean = clean;
    result.others = others;
    result.frames_total = result.frames_kept = NumFrames(clean.size(), cfg);
    return result;
  }

  const int frame_len = cfg.frame_len;
  const int hop = cfg.hop;
  const int frames = NumFrames(clean.size(), cfg);
  Require(frames > 0, ErrorCode::kTooShort, "signal shorter than one frame");

  // hann(frame_len + 2) without its zero endpoints: sums to one at hop = len/2.
  std::vector<double> window(frame_len);
  for (int n = 0; n < frame_len; ++n) {
    window[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (n + 1) /
                                     (frame_len + 1));
  }

  std::vector<double> energy_db(frames);
  double max_db = -std::numeric_limits<double>::infinity();
  double max_energy = 0.0;
  for (int t = 0; t < frames; ++t) {
    double e = 0.0;
    for (int n = 0; n < frame_len; ++n) {
      const double v = window[n] * clean.samples[t * hop + n];
      e += v * v;
    }
    max_energy = std::max(max_energy, e);
    energy_db[t] = 10.0 * std::log10(e + 1e-300);
    max_db = std::max(max_db, energy_db[t]);
  }
  Require(max_energy > 0.0, ErrorCode::kEmptySignal,
          "every clean frame is silent");

  std::vector<int> kept;
  for (int t = 0; t < frames; ++t) {
    if (energy_db[t] > max_db - threshold_db) kept.push_back(t);
  }

  const size_t out_len = static_cast<size_t>(kept.size() - 1) * hop + frame_len;
  std::vector<double> norm(out_len, 0.0);
  auto overlap_add = [&](const Waveform& in) {
    Waveform out;
    out.sample_rate = in.sample_rate;
    out.samples.assign(out_len, 0.0);
    for (size_t k = 0; k < kept.size(); ++k) {
      const size_t src = static_cast<size_t>(kept[k]) * hop;
      const size_t dst = k * hop;
      for (int n = 0; n < frame_len; ++n) {
        out.samples[dst + n] += window[n] * in.samples[src + n];
      }
    }
    for (size_t n = 0; n < out_len; ++n) out.samples[n] /= norm[n];
    return out;
  };
  for (size_t k = 0; k < kept.size(); ++k) {
    for (int n = 0; n < frame_len; ++n) norm[k * hop + n] += window[n];
  }

  result.clean = overlap_add(clean);
  for (const Waveform& w : others) result.others.push_back(overlap_add(w));
  result.frames_kept = static_cast<int>(kept.size());
  result.frames_total = frames;
  return result;
}

}  // namespace ccstoi
