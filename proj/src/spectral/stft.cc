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

#include "spectral/stft.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "common/error.h"
#include "spectral/fft.h"

namespace ccstoi {

void StftConfig::Validate() const {
  Require(hop > 0 && hop <= frame_len && frame_len <= fft_len,
          ErrorCode::kConfig,
          "STFT config requires 0 < hop <= frame_len <= fft_len");
  Require(IsPowerOfTwo(static_cast<size_t>(fft_len)), ErrorCode::kConfig,
          "fft_len must be a power of two, got " + std::to_string(fft_len));
}

StftConfig DefaultStftConfig() { return StftConfig{512, 256, 512}; }

StftConfig ClassicStoiStftConfig() { return StftConfig{256, 128, 512}; }

std::vector<double> HannWindow(int len) {
  std::vector<double> w(len, 1.0);
  if (len == 1) return w;
  for (int n = 0; n < len; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / (len - 1));
  }
  return w;
}

Eigen::MatrixXd Spectrogram::Phase() const {
  return bins.unaryExpr([](const std::complex<double>& c) { return std::arg(c); });
}

int NumFrames(size_t length, const StftConfig& cfg) {
  if (length < static_cast<size_t>(cfg.frame_len)) return 0;
  return static_cast<int>((length - cfg.frame_len) / cfg.hop) + 1;
}

Spectrogram Stft(const Waveform& wave, const StftConfig& cfg) {
  cfg.Validate();
  const int frames = NumFrames(wave.size(), cfg);
  Require(frames > 0, ErrorCode::kTooShort,
          "waveform of " + std::to_string(wave.size()) +
              " samples is shorter than one frame (" +
              std::to_string(cfg.frame_len) + ")");
  const std::vector<double> window = HannWindow(cfg.frame_len);
  const Fft fft(cfg.fft_len);

  Spectrogram spec;
  spec.config = cfg;
  spec.origin_rate = wave.sample_rate;
  spec.bins.resize(cfg.num_bins(), frames);
  std::vector<std::complex<double>> buffer(cfg.fft_len);
  for (int t = 0; t < frames; ++t) {
    const size_t start = static_cast<size_t>(t) * cfg.hop;
    std::fill(buffer.begin(), buffer.end(), std::complex<double>{});
    for (int n = 0; n < cfg.frame_len; ++n) {
      buffer[n] = wave.samples[start + n] * window[n];
    }
    fft.Forward(buffer);
    for (int k = 0; k < cfg.num_bins(); ++k) spec.bins(k, t) = buffer[k];
  }
  return spec;
}

Waveform Istft(const Spectrogram& spec) {
  const StftConfig& cfg = spec.config;
  cfg.Validate();
  Require(spec.num_bins() == cfg.num_bins(), ErrorCode::kShape,
          "spectrogram bin count does not match its config");
  const int frames = static_cast<int>(spec.num_frames());
  Waveform out;
  out.sample_rate = spec.origin_rate;
  if (frames == 0) return out;

  const std::vector<double> window = HannWindow(cfg.frame_len);
  const Fft fft(cfg.fft_len);
  const size_t length =
      static_cast<size_t>(frames - 1) * cfg.hop + cfg.frame_len;
  out.samples.assign(length, 0.0);
  std::vector<double> norm(length, 0.0);
  std::vector<std::complex<double>> buffer(cfg.fft_len);
  const int half = cfg.fft_len / 2;
  for (int t = 0; t < frames; ++t) {
    for (int k = 0; k <= half; ++k) buffer[k] = spec.bins(k, t);
    // Hermitian completion; DC and Nyquist imaginary parts are discarded.
    buffer[0] = buffer[0].real();
    buffer[half] = buffer[half].real();
    for (int k = 1; k < half; ++k) buffer[cfg.fft_len - k] = std::conj(buffer[k]);
    fft.Inverse(buffer);
    const size_t start = static_cast<size_t>(t) * cfg.hop;
    for (int n = 0; n < cfg.frame_len; ++n) {
      out.samples[start + n] += buffer[n].real() * window[n];
      norm[start + n] += window[n] * window[n];
    }
  }
  // Near the outer edges the squared-window sum approaches zero; flooring it
  // keeps modified spectra from being amplified there.
  double peak = 0.0;
  for (double v : norm) peak = std::max(peak, v);
  const double floor = 1e-2 * peak;
  for (size_t n = 0; n < length; ++n) {
    out.samples[n] = norm[n] > 0.0 ? out.samples[n] / std::max(norm[n], floor)
                                   : 0.0;
  }
  return out;
}

Spectrogram Recombine(const Eigen::MatrixXd& magnitude,
                      const Spectrogram& phase_source) {
  Require(magnitude.rows() == phase_source.num_bins() &&
              magnitude.cols() == phase_source.num_frames(),
          ErrorCode::kShape, "magnitude and phase source shapes differ");
  Spectrogram out = phase_source;
  for (Eigen::Index t = 0; t < magnitude.cols(); ++t) {
    for (Eigen::Index k = 0; k < magnitude.rows(); ++k) {
      const std::complex<double> c = phase_source.bins(k, t);
      const double mag = std::abs(c);
      // angle(0) is taken as 0, matching std::arg.
      out.bins(k, t) = mag > 0.0 ? c * (magnitude(k, t) / mag)
                                 : std::complex<double>(magnitude(k, t), 0.0);
    }
  }
  return out;
}

}  // namespace ccstoi
