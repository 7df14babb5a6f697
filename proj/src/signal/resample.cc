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

#include "signal/resample.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "common/error.h"

namespace ccstoi {
namespace {

constexpr double kKaiserBeta = 8.0;
constexpr double kCutoffFraction = 0.95;
// Half filter length, in zero crossings of the lowpass sinc.
constexpr int kZeroCrossings = 64;

double BesselI0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

Waveform Resample(const Waveform& wave, int target_rate) {
  Require(target_rate > 0, ErrorCode::kInvalidArgument,
          "target rate must be positive");
  Require(wave.sample_rate > 0, ErrorCode::kInvalidArgument,
          "source rate must be positive");
  if (target_rate == wave.sample_rate || wave.empty()) {
    Waveform out = wave;
    out.sample_rate = target_rate;
    return out;
  }

  const int64_t g = std::gcd<int64_t>(wave.sample_rate, target_rate);
  const int64_t up = target_rate / g;       // L
  const int64_t down = wave.sample_rate / g;  // M

  // Cutoff in cycles per input sample.
  const double ratio = std::min(1.0, static_cast<double>(up) / down);
  const double cutoff = 0.5 * ratio * kCutoffFraction;
  const double half_width = kZeroCrossings / (2.0 * cutoff);
  const int taps_half = static_cast<int>(std::ceil(half_width));
  const int taps = 2 * taps_half;
  const double i0_beta = BesselI0(kKaiserBeta);

  // Phase p covers output times whose fractional input position is p / L.
  // Tap j multiplies input sample floor(t) - taps_half + 1 + j.
  std::vector<std::vector<double>> table(up, std::vector<double>(taps));
  for (int64_t p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / up;
    double sum = 0.0;
    for (int j = 0; j < taps; ++j) {
      const double offset = frac + taps_half - 1 - j;  // t - k
      const double r = offset / half_width;
      double h = 0.0;
      if (std::abs(r) < 1.0) {
        const double window =
            BesselI0(kKaiserBeta * std::sqrt(1.0 - r * r)) / i0_beta;
        h = 2.0 * cutoff * Sinc(2.0 * cutoff * offset) * window;
      }
      table[p][j] = h;
      sum += h;
    }
    for (double& h : table[p]) h /= sum;
  }

  const int64_t in_len = static_cast<int64_t>(wave.size());
  const int64_t out_len = static_cast<int64_t>(
      std::llround(static_cast<double>(in_len) * up / down));
  Waveform out;
  out.sample_rate = target_rate;
  out.samples.assign(static_cast<size_t>(out_len), 0.0);
  for (int64_t n = 0; n < out_len; ++n) {
    const int64_t num = n * down;
    const int64_t base = num / up;
    const auto& h = table[num % up];
    const int64_t first = base - taps_half + 1;
    double acc = 0.0;
    const int j0 = static_cast<int>(std::max<int64_t>(0, -first));
    const int j1 = static_cast<int>(std::min<int64_t>(taps, in_len - first));
    for (int j = j0; j < j1; ++j) acc += h[j] * wave.samples[first + j];
    out.samples[n] = acc;
  }
  return out;
}

}  // namespace ccstoi
