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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "common/error.h"
#include "corpus/manifest.h"
#include "corpus/mix.h"
#include "signal/synthetic.h"
#include "signal/wav.h"
#include "test_util.h"

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

double Energy(const Waveform& w) {
  double e = 0.0;
  for (double v : w.samples) e += v * v;
  return e;
}

TEST(Mix, ZeroDbBalancesEnergy) {
  const Waveform clean = SyntheticSpeech(1.0, 1);
  const MixResult m = MixAtSnr(clean, WhiteNoise(2.0, 2), 0.0, 3);
  EXPECT_NEAR(Energy(m.noise) / Energy(m.clean), 1.0, 1e-9);
  for (size_t i = 0; i < clean.size(); ++i) {
    EXPECT_NEAR(m.mixture.samples[i], m.clean.samples[i] + m.noise.samples[i], 1e-15);
  }
}

TEST(Mix, VeryHighSnrIsNearlyClean) {
  const Waveform clean = SyntheticSpeech(1.0, 4);
  const MixResult m = MixAtSnr(clean, WhiteNoise(1.0, 5), 120.0, 6);
  double diff = 0.0;
  for (size_t i = 0; i < clean.size(); ++i) diff += std::pow(m.mixture.samples[i] - clean.samples[i], 2);
  EXPECT_LT(std::sqrt(diff / Energy(clean)), 1e-5);
  EXPECT_EQ(m.scale, 1.0);
}

TEST(Mix, RealizedSnrMatchesRequest) {
  const Waveform clean = SyntheticSpeech(1.0, 7);
  for (double snr : {-12.0, -3.0, 0.0, 7.5, 20.0}) {
    const MixResult m = MixAtSnr(clean, WhiteNoise(0.4, 8, 16000, 0.3), snr, 9);
    EXPECT_NEAR(RealizedSnrDb(m.clean, m.mixture), snr, 0.01);
    EXPECT_NEAR(10 * std::log10(Energy(m.clean) / Energy(m.noise)), snr, 1e-9);
  }
}

TEST(Mix, JointPeakScalingPreservesRatio) {
  Waveform clean = SyntheticSpeech(1.0, 10);
  for (double& v : clean.samples) v *= 1.9;
  const MixResult m = MixAtSnr(clean, WhiteNoise(1.0, 11), -12.0, 12);
  EXPECT_LT(m.scale, 1.0);
  double peak = 0.0;
  for (double v : m.mixture.samples) peak = std::max(peak, std::abs(v));
  EXPECT_LE(peak, 1.0);
  EXPECT_NEAR(10 * std::log10(Energy(m.clean) / Energy(m.noise)), -12.0, 1e-9);
  for (size_t i = 0; i < clean.size(); i += 97) EXPECT_NEAR(m.clean.samples[i], m.scale * clean.samples[i], 1e-15);
}

TEST(Mix, DeterministicAndSeedDependent) {
  const Waveform clean = SyntheticSpeech(1.0, 13), noise = WhiteNoise(3.0, 14);
  EXPECT_EQ(MixAtSnr(clean, noise, 0.0, 15).mixture.samples, MixAtSnr(clean, noise, 0.0, 15).mixture.samples);
  EXPECT_NE(MixAtSnr(clean, noise, 0.0, 15).offset, MixAtSnr(clean, noise, 0.0, 16).offset);
}

TEST(Mix, Errors) {
  const Waveform clean = SyntheticSpeech(1.0, 17);
  Waveform silent;
  silent.samples.assign(16000, 0.0);
  EXPECT_EQ(CodeOf([&] { MixAtSnr(clean, silent, 0.0, 1); }), ErrorCode::kDegenerateNoise);
  Waveform other_rate = WhiteNoise(1.0, 18, 8000);
  EXPECT_EQ(CodeOf([&] { MixAtSnr(clean, other_rate, 0.0, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_THROW(MixAtSnr(clean, WhiteNoise(1.0, 19), std::nan(""), 1), Error);
  EXPECT_THROW(MixAtSnr(silent, WhiteNoise(1.0, 19), 0.0, 1), Error);
}

TEST(SnrGrids, Values) {
  EXPECT_EQ(SnrGridNonSpeech(), (std::vector<double>{-12, -9, -6, -3, 0, 3, 6, 9}));
  EXPECT_EQ(SnrGridSpeech(), (std::vector<double>{0, 5, 10, 15, 20}));
  for (const auto& g : {SnrGridNonSpeech(), SnrGridSpeech()}) {
    EXPECT_TRUE(std::adjacent_find(g.begin(), g.end(), std::greater_equal<double>()) == g.end());
  }
}

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override { testing::WriteSourceCorpus(dir_.path(), testing::CorpusSpec{}); }
  CorpusLayout Layout(const std::string& out = "corpus") const {
    return {dir_ / "clean", dir_ / "noise", dir_ / out};
  }
  static SplitSpec TrainTest() {
    SplitSpec s;
    s.train = {"spk1"};
    s.test = {"spk2"};
    return s;
  }
  testing::TempDir dir_{"manifest"};
};

TEST_F(ManifestTest, CartesianProduct) {
  const Manifest m = BuildManifest(Layout(), {-12, -3, 6, 15}, TrainTest(), 1);
  EXPECT_EQ(m.entries.size(), 48u);
  std::set<std::string> ids;
  for (const ManifestEntry& e : m.entries) {
    ids.insert(e.utterance_id);
    EXPECT_EQ(e.split, e.speaker_id == "spk1" ? Split::kTrain : Split::kTest);
  }
  EXPECT_EQ(ids.size(), 48u);
}

TEST_F(ManifestTest, SameSeedIsByteIdentical) {
  Manifest a = BuildManifest(Layout("a"), {0, 5}, TrainTest(), 3);
  Manifest b = BuildManifest(Layout("a"), {0, 5}, TrainTest(), 3);
  ForgeCorpus(&a, 1);
  const std::string first = SerializeManifest(a);
  ForgeCorpus(&b, 3);
  EXPECT_EQ(first, SerializeManifest(b));
  EXPECT_NE(SerializeManifest(BuildManifest(Layout("a"), {0, 5}, TrainTest(), 4)),
            SerializeManifest(BuildManifest(Layout("a"), {0, 5}, TrainTest(), 3)));
}

TEST_F(ManifestTest, OverlappingOrUnknownSpeakersAreSplitErrors) {
  SplitSpec s;
  s.train = {"spk1", "spk2"};
  s.test = {"spk2"};
  EXPECT_EQ(CodeOf([&] { BuildManifest(Layout(), {0}, s, 1); }), ErrorCode::kSplit);
  s.train = {"spk1"};
  s.test = {"spk9"};
  EXPECT_EQ(CodeOf([&] { BuildManifest(Layout(), {0}, s, 1); }), ErrorCode::kSplit);
}

TEST_F(ManifestTest, CountModeKeepsSpeakersDisjoint) {
  SplitSpec s;
  s.train_count = 1;
  s.test_count = 1;
  const Manifest m = BuildManifest(Layout(), {0}, s, 5);
  std::map<std::string, std::set<Split>> seen;
  for (const ManifestEntry& e : m.entries) seen[e.speaker_id].insert(e.split);
  EXPECT_EQ(seen.size(), 2u);
  std::set<Split> splits;
  for (const auto& [spk, ss] : seen) {
    EXPECT_EQ(ss.size(), 1u) << spk;
    splits.insert(*ss.begin());
  }
  EXPECT_EQ(splits, (std::set<Split>{Split::kTrain, Split::kTest}));
}

TEST_F(ManifestTest, StoredFilesReproduceRequestedSnr) {
  Manifest m = BuildManifest(Layout(), {-12, 0, 9}, TrainTest(), 6);
  ForgeCorpus(&m, 2);
  SaveManifest(m, dir_ / "corpus/manifest.txt");
  const Manifest loaded = LoadManifest(dir_ / "corpus/manifest.txt");
  ASSERT_EQ(loaded.entries.size(), m.entries.size());
  ValidateManifest(loaded);
  for (const ManifestEntry& e : loaded.entries) {
    const Waveform clean = ReadWav(loaded.Resolve(e.clean_path));
    const Waveform noisy = ReadWav(loaded.Resolve(e.noisy_path));
    EXPECT_NEAR(RealizedSnrDb(clean, noisy), e.snr_db, 0.01) << e.utterance_id;
  }
}

TEST_F(ManifestTest, SerializationRoundTrip) {
  Manifest m = BuildManifest(Layout(), {0, 3}, TrainTest(), 7);
  ForgeCorpus(&m, 1);
  const std::string text = SerializeManifest(m);
  EXPECT_EQ(text.rfind("# ccstoi-manifest v1\n", 0), 0u);
  EXPECT_EQ(SerializeManifest(ParseManifest(text)), text);
  EXPECT_EQ(CodeOf([] { ParseManifest("# ccstoi-manifest v1\nid=x\tsplit=nowhere\n"); }), ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([] { ParseManifest("# something else\n"); }), ErrorCode::kFormat);
}

TEST_F(ManifestTest, ValidationCatchesMissingFilesAndOverlap) {
  Manifest m = BuildManifest(Layout(), {0}, TrainTest(), 8);
  ForgeCorpus(&m, 1);
  ValidateManifest(m);
  std::filesystem::remove(m.Resolve(m.entries[0].noisy_path));
  EXPECT_EQ(CodeOf([&] { ValidateManifest(m); }), ErrorCode::kIo);
  ValidateManifest(m, false);
  m.entries[1].split = Split::kTest;
  EXPECT_EQ(CodeOf([&] { ValidateManifest(m, false); }), ErrorCode::kSplit);
}

}  // namespace
}  // namespace ccstoi
