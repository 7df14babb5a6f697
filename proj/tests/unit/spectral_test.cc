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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "common/error.h"
#include "common/rng.h"
#include "oracles.h"
#include "signal/synthetic.h"
#include "spectral/fft.h"
#include "spectral/stft.h"

namespace ccstoi {
namespace {

Waveform Constant(size_t n, double v) {
  Waveform w;
  w.samples.assign(n, v);
  return w;
}

TEST(Fft, MatchesDirectDft) {
  Rng rng(1);
  const size_t n = 64;
  std::vector<std::complex<double>> x(n);
  for (auto& v : x) v = {rng.Gaussian(), rng.Gaussian()};
  std::vector<std::complex<double>> y = x;
  Fft(n).Forward(y);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (size_t t = 0; t < n; ++t) {
      acc += x[t] * std::polar(1.0, -2 * std::numbers::pi * double(k * t) / double(n));
    }
    EXPECT_NEAR(std::abs(acc - y[k]), 0.0, 1e-10);
  }
  Fft(n).Inverse(y);
  for (size_t t = 0; t < n; ++t) EXPECT_NEAR(std::abs(y[t] - x[t]), 0.0, 1e-12);
}

TEST(Fft, RejectsNonPowerOfTwo) {
  EXPECT_THROW(Fft(500), Error);
  EXPECT_TRUE(IsPowerOfTwo(512));
  EXPECT_FALSE(IsPowerOfTwo(384));
}

TEST(Stft, ConfigValidation) {
  StftConfig cfg;
  cfg.fft_len = 500;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = StftConfig{};
  cfg.fft_len = 256;  // shorter than the frame
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = StftConfig{};
  cfg.hop = 0;
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(Stft, DcInputConcentratesInBinZero) {
  const Spectrogram s = Stft(Constant(16000, 1.0), DefaultStftConfig());
  const Eigen::MatrixXd mag = s.Magnitude();
  ASSERT_EQ(mag.rows(), 257);
  for (Eigen::Index t = 0; t < mag.cols(); ++t) {
    EXPECT_NEAR(mag(0, t), 255.5, 1e-6);
    // The symmetric window is not exactly periodic, so bins beyond 2 keep a
    // leakage floor more than 70 dB below bin 0.
    for (Eigen::Index k = 3; k < mag.rows(); ++k) EXPECT_LT(mag(k, t), 3e-4 * mag(0, t));
  }
}

TEST(Stft, SineAtBinCenterPeaksAtThatBin) {
  const int k = 40;
  Waveform w;
  for (int n = 0; n < 16000; ++n) w.samples.push_back(std::sin(2 * std::numbers::pi * k * n / 512.0));
  const Eigen::MatrixXd mag = Stft(w, DefaultStftConfig()).Magnitude();
  for (Eigen::Index t = 1; t + 1 < mag.cols(); ++t) {
    Eigen::Index arg;
    mag.col(t).maxCoeff(&arg);
    EXPECT_EQ(arg, k);
  }
}

TEST(Stft, ZeroSignalGivesZeroMagnitude) {
  EXPECT_EQ(Stft(Constant(4096, 0.0), DefaultStftConfig()).Magnitude().maxCoeff(), 0.0);
}

TEST(Stft, FrameCountAndShortInput) {
  EXPECT_EQ(NumFrames(512, DefaultStftConfig()), 1);
  EXPECT_EQ(NumFrames(512 + 255, DefaultStftConfig()), 1);
  EXPECT_EQ(NumFrames(1024, DefaultStftConfig()), 3);
  try {
    Stft(Constant(511, 1.0), DefaultStftConfig());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooShort);
  }
}

TEST(Stft, MatchesDirectDftOracle) {
  const Waveform w = SyntheticSpeech(0.2, 5);
  const Eigen::MatrixXd fast = Stft(w, DefaultStftConfig()).Magnitude();
  const Eigen::MatrixXd slow = oracle::NaiveMagnitude(w.samples, 512, 256, 512);
  ASSERT_EQ(fast.rows(), slow.rows());
  ASSERT_EQ(fast.cols(), slow.cols());
  EXPECT_LT((fast - slow).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Stft, ParsevalPerFrame) {
  const Waveform w = SyntheticSpeech(0.3, 9);
  const Spectrogram s = Stft(w, DefaultStftConfig());
  const std::vector<double> win = HannWindow(512);
  for (Eigen::Index t = 0; t < s.num_frames(); ++t) {
    double time = 0.0;
    for (int n = 0; n < 512; ++n) {
      const double v = w.samples[t * 256 + n] * win[n];
      time += v * v;
    }
    double freq = std::norm(s.bins(0, t)) + std::norm(s.bins(256, t));
    for (int k = 1; k < 256; ++k) freq += 2 * std::norm(s.bins(k, t));
    EXPECT_NEAR(freq / 512.0, time, 1e-9 * std::max(1.0, time));
  }
}

TEST(Stft, Linear) {
  const Waveform a = SyntheticSpeech(0.3, 1), b = SyntheticSpeech(0.3, 2);
  Waveform c = a;
  for (size_t i = 0; i < c.size(); ++i) c.samples[i] = 2 * a.samples[i] - 3 * b.samples[i];
  const auto sa = Stft(a, DefaultStftConfig()), sb = Stft(b, DefaultStftConfig()),
             sc = Stft(c, DefaultStftConfig());
  EXPECT_LT((sc.bins - (2.0 * sa.bins - 3.0 * sb.bins)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Stft, HannWindowIsSymmetric) {
  const std::vector<double> w = HannWindow(512);
  EXPECT_EQ(w.front(), 0.0);
  EXPECT_NEAR(w.back(), 0.0, 1e-15);
  double sum = 0.0;
  for (double v : w) sum += v;
  EXPECT_NEAR(sum, 255.5, 1e-9);
}

TEST(Istft, RoundTripInterior) {
  const Waveform w = SyntheticSpeech(1.0, 3);
  const Waveform r = Istft(Stft(w, DefaultStftConfig()));
  double err = 0.0;
  size_t count = 0;
  for (size_t i = 512; i + 512 < r.size(); ++i) {
    err += std::pow(r.samples[i] - w.samples[i], 2);
    ++count;
  }
  EXPECT_LT(std::sqrt(err / count), 1e-6);
}

TEST(Istft, OutputLengthAndZeroInput) {
  const Spectrogram s = Stft(Constant(4096, 0.0), DefaultStftConfig());
  const Waveform r = Istft(s);
  EXPECT_EQ(r.size(), static_cast<size_t>((s.num_frames() - 1) * 256 + 512));
  for (double v : r.samples) EXPECT_EQ(v, 0.0);
}

TEST(Istft, MagnitudeWithOwnPhaseReconstructs) {
  const Waveform w = SyntheticSpeech(0.5, 4);
  const Spectrogram s = Stft(w, DefaultStftConfig());
  const Waveform r = Istft(Recombine(s.Magnitude(), s));
  for (size_t i = 512; i + 512 < r.size(); ++i) EXPECT_NEAR(r.samples[i], w.samples[i], 1e-9);
}

TEST(Recombine, Examples) {
  const Spectrogram s = Stft(SyntheticSpeech(0.2, 8), DefaultStftConfig());
  const Eigen::MatrixXd mag = s.Magnitude();
  EXPECT_LT((Recombine(mag, s).bins - s.bins).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(Recombine(Eigen::MatrixXd::Zero(mag.rows(), mag.cols()), s).bins.cwiseAbs().maxCoeff(),
            0.0);
  EXPECT_LT((Recombine(2.0 * mag, s).bins - 2.0 * s.bins).cwiseAbs().maxCoeff(), 1e-12);
  try {
    Recombine(Eigen::MatrixXd::Zero(mag.rows() - 1, mag.cols()), s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShape);
  }
}

}  // namespace
}  // namespace ccstoi
