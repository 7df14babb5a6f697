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

#include "signal/synthetic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "common/error.h"
#include "common/rng.h"

namespace ccstoi {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class SegmentKind { kVoiced, kUnvoiced, kPause };

struct Segment {
  size_t begin;
  size_t end;
  SegmentKind kind;
  double gain;
};

// Two-pole resonator, re-tuned every sample.
class Resonator {
 public:
  double Process(double x, double freq, double bandwidth, double rate) {
    const double r = std::exp(-std::numbers::pi * bandwidth / rate);
    const double a1 = 2.0 * r * std::cos(kTwoPi * freq / rate);
    const double a2 = -r * r;
    const double gain = 1.0 - r;
    const double y = gain * x + a1 * y1_ + a2 * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double y1_ = 0.0;
  double y2_ = 0.0;
};

// Slowly varying trajectory: sum of two sinusoids with random phases.
struct Trajectory {
  double center, depth, rate1, rate2, phase1, phase2;

  double At(double t) const {
    return center + depth * (0.6 * std::sin(kTwoPi * rate1 * t + phase1) +
                             0.4 * std::sin(kTwoPi * rate2 * t + phase2));
  }
};

Trajectory MakeTrajectory(Rng& rng, double lo, double hi) {
  Trajectory tr;
  tr.center = rng.Uniform(lo + 0.35 * (hi - lo), hi - 0.35 * (hi - lo));
  tr.depth = std::min(tr.center - lo, hi - tr.center);
  tr.rate1 = rng.Uniform(0.3, 1.5);
  tr.rate2 = rng.Uniform(1.5, 4.0);
  tr.phase1 = rng.Uniform(0.0, kTwoPi);
  tr.phase2 = rng.Uniform(0.0, kTwoPi);
  return tr;
}

std::vector<Segment> MakeSegments(Rng& rng, size_t length, int rate) {
  std::vector<Segment> segments;
  size_t pos = 0;
  while (pos < length) {
    const double u = rng.Uniform();
    SegmentKind kind = u < 0.6   ? SegmentKind::kVoiced
                       : u < 0.8 ? SegmentKind::kUnvoiced
                                 : SegmentKind::kPause;
    const double dur = kind == SegmentKind::kPause ? rng.Uniform(0.04, 0.15)
                                                   : rng.Uniform(0.08, 0.25);
    const size_t len = std::max<size_t>(1, static_cast<size_t>(dur * rate));
    const double gain = kind == SegmentKind::kPause ? 0.0 : rng.Uniform(0.4, 1.0);
    segments.push_back({pos, std::min(length, pos + len), kind, gain});
    pos += len;
  }
  return segments;
}

}  // namespace

Waveform SyntheticSpeech(double duration_s, uint64_t seed, int rate) {
  Require(duration_s > 0.0, ErrorCode::kInvalidArgument,
          "duration must be positive");
  Require(rate > 0, ErrorCode::kInvalidArgument, "rate must be positive");
  const size_t length =
      static_cast<size_t>(std::llround(duration_s * static_cast<double>(rate)));
  Waveform wave;
  wave.sample_rate = rate;
  wave.samples.assign(length, 0.0);
  if (length == 0) return wave;

  Rng rng(MixSeed(seed, 0x5eec4));
  const Trajectory f0 = MakeTrajectory(rng, 90.0, 250.0);
  const std::array<Trajectory, 3> formants = {
      MakeTrajectory(rng, 300.0, 900.0), MakeTrajectory(rng, 900.0, 2400.0),
      MakeTrajectory(rng, 2200.0, 3600.0)};
  const std::array<double, 3> bandwidths = {rng.Uniform(60.0, 110.0),
                                            rng.Uniform(90.0, 160.0),
                                            rng.Uniform(120.0, 220.0)};
  const std::array<double, 3> formant_gains = {1.0, rng.Uniform(0.5, 0.9),
                                               rng.Uniform(0.25, 0.6)};
  const std::vector<Segment> segments = MakeSegments(rng, length, rate);

  // Per-sample gates, smoothed over 10 ms at segment boundaries.
  std::vector<double> voiced_gate(length, 0.0), unvoiced_gate(length, 0.0);
  for (const Segment& s : segments) {
    for (size_t n = s.begin; n < s.end; ++n) {
      (s.kind == SegmentKind::kUnvoiced ? unvoiced_gate : voiced_gate)[n] =
          s.gain;
    }
  }
  const size_t ramp = std::max<size_t>(1, static_cast<size_t>(0.01 * rate));
  // Centered moving average applied twice (triangular kernel).
  auto smooth = [&](std::vector<double>& gate) {
    std::vector<double> prefix(length + 1);
    for (int pass = 0; pass < 2; ++pass) {
      prefix[0] = 0.0;
      for (size_t n = 0; n < length; ++n) prefix[n + 1] = prefix[n] + gate[n];
      for (size_t n = 0; n < length; ++n) {
        const size_t lo = n >= ramp / 2 ? n - ramp / 2 : 0;
        const size_t hi = std::min(length, n + ramp / 2 + 1);
        gate[n] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
      }
    }
  };
  smooth(voiced_gate);
  smooth(unvoiced_gate);

  std::array<Resonator, 3> resonators;
  double phase = 0.0;
  const double nyquist = 0.5 * rate;
  for (size_t n = 0; n < length; ++n) {
    const double t = static_cast<double>(n) / rate;
    const double pitch = std::clamp(f0.At(t), 90.0, 250.0);
    phase += kTwoPi * pitch / rate;
    if (phase > kTwoPi) phase -= kTwoPi;

    double source = 0.0;
    if (voiced_gate[n] > 0.0) {
      const int harmonics =
          std::max(1, static_cast<int>(std::min(nyquist, 5000.0) / pitch));
      for (int h = 1; h <= harmonics; ++h) {
        source += std::sin(h * phase) / std::sqrt(static_cast<double>(h));
      }
      source *= voiced_gate[n];
    }
    const double noise = rng.Uniform(-1.0, 1.0) * 2.0;
    source += noise * unvoiced_gate[n];

    double y = 0.0;
    for (size_t k = 0; k < resonators.size(); ++k) {
      const double freq = std::min(formants[k].At(t), 0.45 * rate);
      y += formant_gains[k] *
           resonators[k].Process(source, freq, bandwidths[k], rate);
    }
    wave.samples[n] = y;
  }

  double peak = 0.0;
  for (double s : wave.samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.0) {
    for (double& s : wave.samples) s *= 0.5 / peak;
  }
  return wave;
}

Waveform WhiteNoise(double duration_s, uint64_t seed, int rate, double stddev) {
  Require(duration_s > 0.0 && rate > 0, ErrorCode::kInvalidArgument,
          "duration and rate must be positive");
  Rng rng(MixSeed(seed, 0x4015e));
  Waveform wave;
  wave.sample_rate = rate;
  wave.samples.resize(
      static_cast<size_t>(std::llround(duration_s * static_cast<double>(rate))));
  for (double& s : wave.samples) s = stddev * rng.Gaussian();
  return wave;
}

}  // namespace ccstoi
