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
#include <limits>
#include <numbers>

#include "common/error.h"
#include "octave/octave_bands.h"
#include "oracles.h"
#include "signal/synthetic.h"
#include "spectral/stft.h"

namespace ccstoi {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(BandMatrix, LowestBandAt16k) {
  const OctaveBandMatrix b = BuildBandMatrix(16000, 512);
  ASSERT_EQ(b.band_count(), 15);
  const double lo = 150.0 * std::pow(2.0, -1.0 / 6), hi = 150.0 * std::pow(2.0, 1.0 / 6);
  for (int k = 0; k < 257; ++k) {
    const double f = k * 16000.0 / 512;
    EXPECT_EQ(b.weights(0, k), (f >= lo && f < hi) ? 1.0 : 0.0) << "bin " << k;
  }
  // 156.25 Hz is the only bin centre inside [133.6, 168.4) Hz.
  EXPECT_EQ(b.bin_ranges[0], std::make_pair(5, 6));
}

TEST(BandMatrix, CentreFrequencies) {
  const OctaveBandMatrix b = BuildBandMatrix(16000, 512);
  EXPECT_DOUBLE_EQ(b.center_freqs[0], 150.0);
  EXPECT_NEAR(b.center_freqs[14], 3809.7625, 1e-3);
  for (int i = 0; i < 15; ++i) EXPECT_NEAR(b.center_freqs[i], 150 * std::pow(2.0, i / 3.0), 1e-9);
}

TEST(BandMatrix, BandsAreDisjointAndContiguous) {
  const OctaveBandMatrix b = BuildBandMatrix(16000, 512);
  const Eigen::VectorXd cover = b.weights.colwise().sum();
  EXPECT_LE(cover.maxCoeff(), 1.0);
  for (int i = 0; i < 15; ++i) {
    EXPECT_LT(b.bin_ranges[i].first, b.bin_ranges[i].second);
    if (i > 0) EXPECT_EQ(b.bin_ranges[i].first, b.bin_ranges[i - 1].second);
    for (int k = b.bin_ranges[i].first; k < b.bin_ranges[i].second; ++k) EXPECT_EQ(b.weights(i, k), 1.0);
  }
}

TEST(BandMatrix, CoarseGridIsConfigError) {
  EXPECT_EQ(CodeOf([] { BuildBandMatrix(16000, 64); }), ErrorCode::kConfig);
}

TEST(BandMatrix, EightKilohertzShares16kResolution) {
  // 8000 / 256 has the same 31.25 Hz spacing as 16000 / 512, so every band
  // below Nyquist is populated.
  const OctaveBandMatrix b = BuildBandMatrix(8000, 256);
  EXPECT_EQ(b.band_count(), 15);
  EXPECT_EQ(b.bin_ranges[0], std::make_pair(5, 6));
}

TEST(Envelopes, Examples) {
  const OctaveBandMatrix b = BuildBandMatrix(16000, 512);
  Eigen::MatrixXd mag = Eigen::MatrixXd::Zero(257, 2);
  mag(5, 0) = 3.0;  // band 0 holds a single bin
  const int lo = b.bin_ranges[6].first;
  mag(lo, 1) = 3.0;
  mag(lo + 1, 1) = 4.0;
  const Eigen::MatrixXd env = BandEnvelopes(mag, b);
  EXPECT_DOUBLE_EQ(env(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(env(6, 1), 5.0);
  EXPECT_EQ(BandEnvelopes(Eigen::MatrixXd::Zero(257, 4), b).maxCoeff(), 0.0);
  EXPECT_EQ(CodeOf([&] { BandEnvelopes(Eigen::MatrixXd::Zero(100, 4), b); }), ErrorCode::kShape);
}

TEST(Envelopes, MatchOracleAndArePositivelyHomogeneous) {
  const OctaveBandMatrix b = BuildBandMatrix(16000, 512);
  const Eigen::MatrixXd mag = Stft(SyntheticSpeech(0.5, 2), DefaultStftConfig()).Magnitude();
  const Eigen::MatrixXd env = BandEnvelopes(mag, b);
  EXPECT_LT((env - oracle::NaiveEnvelopes(mag, 16000, 512)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((BandEnvelopes(2.5 * mag, b) - 2.5 * env).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GE(env.minCoeff(), 0.0);
}

TEST(Segments, Counts) {
  EXPECT_EQ(Segment(Eigen::MatrixXd::Ones(15, 30), 30).num_segments(), 1);
  const EnvelopeSegments s = Segment(Eigen::MatrixXd::Random(15, 40), 30);
  EXPECT_EQ(s.num_segments(), 11);
  EXPECT_EQ(s.segment(3, 10)(0), s.envelopes()(3, 10));
  EXPECT_EQ(CodeOf([] { Segment(Eigen::MatrixXd::Ones(15, 29), 30); }), ErrorCode::kTooShort);
}

Waveform Tone(double seconds, double rate = 10000) {
  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  for (int n = 0; n < seconds * rate; ++n) w.samples.push_back(0.5 * std::sin(2 * std::numbers::pi * 440 * n / rate));
  return w;
}

TEST(SilenceRemoval, NoSilenceIsIdentityOnInterior) {
  const Waveform w = Tone(1.0);
  const SilenceRemovalResult r = RemoveSilentFrames(w, {w}, ClassicStoiStftConfig());
  EXPECT_EQ(r.frames_kept, r.frames_total);
  for (size_t i = 256; i + 256 < r.clean.size(); ++i) EXPECT_NEAR(r.clean.samples[i], w.samples[i], 1e-12);
  EXPECT_EQ(r.others[0].samples, r.clean.samples);
}

TEST(SilenceRemoval, TrimsTrailingSilence) {
  Waveform w = Tone(1.0);
  Waveform other = w;
  w.samples.resize(20000, 0.0);
  other.samples.resize(20000, 0.0);
  for (size_t i = 10000; i < 20000; ++i) other.samples[i] = 0.01;
  const SilenceRemovalResult r = RemoveSilentFrames(w, {other}, ClassicStoiStftConfig());
  EXPECT_NEAR(r.clean.duration(), 1.0, 0.03);
  EXPECT_EQ(r.others[0].size(), r.clean.size());
}

TEST(SilenceRemoval, InfiniteThresholdIsIdentity) {
  Waveform w = Tone(0.5);
  w.samples.resize(10000, 0.0);
  const SilenceRemovalResult r = RemoveSilentFrames(
      w, {}, ClassicStoiStftConfig(), std::numeric_limits<double>::infinity());
  EXPECT_EQ(r.frames_kept, r.frames_total);
}

TEST(SilenceRemoval, Idempotent) {
  Waveform w = Tone(0.5);
  w.samples.resize(10000, 0.0);
  const SilenceRemovalResult once = RemoveSilentFrames(w, {}, ClassicStoiStftConfig());
  const SilenceRemovalResult twice = RemoveSilentFrames(once.clean, {}, ClassicStoiStftConfig());
  EXPECT_EQ(twice.frames_kept, twice.frames_total);
  ASSERT_EQ(twice.clean.size(), once.clean.size());
  for (size_t i = 256; i + 256 < once.clean.size(); ++i) {
    EXPECT_NEAR(twice.clean.samples[i], once.clean.samples[i], 1e-12);
  }
}

TEST(SilenceRemoval, AllSilentIsEmptySignalError) {
  Waveform w;
  w.sample_rate = 10000;
  w.samples.assign(5000, 0.0);
  EXPECT_EQ(CodeOf([&] { RemoveSilentFrames(w, {}, ClassicStoiStftConfig()); }),
            ErrorCode::kEmptySignal);
}

}  // namespace
}  // namespace ccstoi
