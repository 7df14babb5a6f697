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

#include "corpus/mix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "common/error.h"
#include "common/rng.h"

namespace ccstoi {
namespace {

// Largest 16-bit PCM amplitude, so a peak-normalized mixture survives WAV
// quantization without clamping.
constexpr double kFullScale = 32767.0 / 32768.0;

double MeanSquare(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

}  // namespace

MixResult MixAtSnr(const Waveform& clean, const Waveform& noise, double snr_db,
                   uint64_t seed) {
  Require(std::isfinite(snr_db), ErrorCode::kInvalidArgument,
          "SNR must be finite");
  Require(clean.sample_rate == noise.sample_rate, ErrorCode::kInvalidArgument,
          "clean (" + std::to_string(clean.sample_rate) + " Hz) and noise (" +
              std::to_string(noise.sample_rate) + " Hz) rates differ");
  Require(!clean.empty() && !noise.empty(), ErrorCode::kInvalidArgument,
          "clean and noise must be non-empty");
  const double clean_power = MeanSquare(clean.samples);
  Require(clean_power > 0.0, ErrorCode::kInvalidArgument,
          "clean signal is silent");

  const size_t len = clean.size();
  Rng rng(seed);
  MixResult out;
  out.offset = noise.size() > len
                   ? static_cast<size_t>(rng.Below(noise.size() - len + 1))
                   : static_cast<size_t>(rng.Below(noise.size()));
  std::vector<double> segment(len);
  for (size_t n = 0; n < len; ++n) {
    segment[n] = noise.samples[(out.offset + n) % noise.size()];
  }
  const double noise_power = MeanSquare(segment);
  Require(noise_power > 0.0, ErrorCode::kDegenerateNoise,
          "selected noise segment is silent");

  out.gain = std::sqrt(clean_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
  out.clean = clean;
  out.noise.sample_rate = clean.sample_rate;
  out.noise.samples.resize(len);
  out.mixture.sample_rate = clean.sample_rate;
  out.mixture.samples.resize(len);
  double peak = 0.0;
  for (size_t n = 0; n < len; ++n) {
    out.noise.samples[n] = out.gain * segment[n];
    out.mixture.samples[n] = clean.samples[n] + out.noise.samples[n];
    peak = std::max(peak, std::abs(out.mixture.samples[n]));
  }
  if (peak > kFullScale) {
    out.scale = kFullScale / peak;
    for (size_t n = 0; n < len; ++n) {
      out.clean.samples[n] *= out.scale;
      out.noise.samples[n] *= out.scale;
      out.mixture.samples[n] = out.clean.samples[n] + out.noise.samples[n];
    }
  }
  return out;
}

double RealizedSnrDb(const Waveform& clean, const Waveform& mixture) {
  Require(clean.size() == mixture.size(), ErrorCode::kShape,
          "clean and mixture lengths differ");
  double signal = 0.0, residual = 0.0;
  for (size_t n = 0; n < clean.size(); ++n) {
    signal += clean.samples[n] * clean.samples[n];
    const double d = mixture.samples[n] - clean.samples[n];
    residual += d * d;
  }
  Require(signal > 0.0 && residual > 0.0, ErrorCode::kUndefinedMetric,
          "SNR undefined for silent clean or noise component");
  return 10.0 * std::log10(signal / residual);
}

std::vector<double> SnrGridSpeech() { return {0.0, 5.0, 10.0, 15.0, 20.0}; }

std::vector<double> SnrGridNonSpeech() {
  std::vector<double> grid;
  for (int snr = -12; snr <= 9; snr += 3) grid.push_back(snr);
  return grid;
}

}  // namespace ccstoi
