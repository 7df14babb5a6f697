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
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ccstoi/ccstoi.h"

namespace {

class Scratch {
 public:
  Scratch() {
    std::string pattern = (std::filesystem::temp_directory_path() / "ccstoi-capi-XXXXXX").string();
    path_ = mkdtemp(pattern.data());
  }
  ~Scratch() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string operator/(const std::string& rel) const { return path_ + "/" + rel; }

 private:
  std::string path_;
};

struct WaveDeleter {
  void operator()(ccstoi_waveform* w) const { ccstoi_waveform_free(w); }
};
using Wave = std::unique_ptr<ccstoi_waveform, WaveDeleter>;

Wave Speech(double seconds, uint64_t seed, int rate = 16000) {
  ccstoi_waveform* w = nullptr;
  EXPECT_EQ(ccstoi_synthetic_speech(seconds, seed, rate, &w), CCSTOI_OK);
  return Wave(w);
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(ccstoi_version(), "");
  EXPECT_STREQ(ccstoi_status_name(CCSTOI_OK), "ok");
  EXPECT_STRNE(ccstoi_status_name(CCSTOI_ERR_TOO_SHORT), ccstoi_status_name(CCSTOI_ERR_IO));
}

TEST(CApi, ErrorsSetLastError) {
  ccstoi_waveform* w = nullptr;
  EXPECT_EQ(ccstoi_waveform_read("/nonexistent/file.wav", &w), CCSTOI_ERR_IO);
  EXPECT_EQ(w, nullptr);
  EXPECT_NE(std::string(ccstoi_last_error()).find("/nonexistent/file.wav"), std::string::npos);
  EXPECT_EQ(ccstoi_waveform_create(nullptr, 3, 16000, &w), CCSTOI_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ccstoi_synthetic_speech(1.0, 1, 16000, nullptr), CCSTOI_ERR_INVALID_ARGUMENT);
}

TEST(CApi, WaveformLifecycle) {
  Scratch dir;
  const double samples[] = {0.0, 0.5, -0.25};
  ccstoi_waveform* raw = nullptr;
  ASSERT_EQ(ccstoi_waveform_create(samples, 3, 8000, &raw), CCSTOI_OK);
  Wave w(raw);
  EXPECT_EQ(ccstoi_waveform_length(w.get()), 3u);
  EXPECT_EQ(ccstoi_waveform_rate(w.get()), 8000);
  EXPECT_EQ(ccstoi_waveform_samples(w.get())[1], 0.5);
  ASSERT_EQ(ccstoi_waveform_write(w.get(), (dir / "a.wav").c_str()), CCSTOI_OK);
  ASSERT_EQ(ccstoi_waveform_read((dir / "a.wav").c_str(), &raw), CCSTOI_OK);
  Wave back(raw);
  EXPECT_EQ(ccstoi_waveform_samples(back.get())[2], -0.25);

  const Wave speech = Speech(0.5, 2, 48000);
  ASSERT_EQ(ccstoi_waveform_resample(speech.get(), 16000, &raw), CCSTOI_OK);
  Wave resampled(raw);
  EXPECT_EQ(ccstoi_waveform_length(resampled.get()), 8000u);
}

TEST(CApi, MixAndMetrics) {
  ccstoi_settings* settings = nullptr;
  ASSERT_EQ(ccstoi_settings_create(&settings), CCSTOI_OK);
  const Wave clean = Speech(1.5, 3);
  ccstoi_waveform* raw = nullptr;
  ASSERT_EQ(ccstoi_white_noise(2.0, 4, 16000, 0.1, &raw), CCSTOI_OK);
  const Wave noise(raw);
  ccstoi_waveform *mix_raw = nullptr, *clean_raw = nullptr;
  double gain = 0, scale = 0;
  ASSERT_EQ(ccstoi_mix_at_snr(clean.get(), noise.get(), 0.0, 5, &mix_raw, &clean_raw, &gain, &scale),
            CCSTOI_OK);
  const Wave mixture(mix_raw), scaled_clean(clean_raw);
  EXPECT_GT(gain, 0.0);
  EXPECT_LE(scale, 1.0);

  double v = 0;
  ASSERT_EQ(ccstoi_metric(settings, "cc-stoi", clean.get(), clean.get(), &v), CCSTOI_OK);
  EXPECT_NEAR(v, 1.0, 1e-12);
  ASSERT_EQ(ccstoi_metric(settings, "sdi", clean.get(), clean.get(), &v), CCSTOI_OK);
  EXPECT_EQ(v, 0.0);
  double noisy_cc = 0, noisy_classic = 0, noisy_mod = 0;
  ASSERT_EQ(ccstoi_metric(settings, "cc-stoi", scaled_clean.get(), mixture.get(), &noisy_cc), CCSTOI_OK);
  ASSERT_EQ(ccstoi_metric(settings, "modified-stoi", scaled_clean.get(), mixture.get(), &noisy_mod),
            CCSTOI_OK);
  ASSERT_EQ(ccstoi_metric(settings, "classic-stoi", scaled_clean.get(), mixture.get(), &noisy_classic),
            CCSTOI_OK);
  EXPECT_LT(noisy_cc, 1.0);
  EXPECT_EQ(noisy_cc, noisy_mod);
  EXPECT_EQ(ccstoi_metric(settings, "pesq", clean.get(), clean.get(), &v), CCSTOI_ERR_CONFIG);
  const Wave tiny = Speech(0.1, 6);
  EXPECT_EQ(ccstoi_metric(settings, "cc-stoi", tiny.get(), tiny.get(), &v), CCSTOI_ERR_TOO_SHORT);
  ccstoi_settings_free(settings);
}

TEST(CApi, SettingsValidation) {
  ccstoi_settings* s = nullptr;
  ASSERT_EQ(ccstoi_settings_create(&s), CCSTOI_OK);
  EXPECT_EQ(ccstoi_settings_set(s, "metric.beta_db", "-20"), CCSTOI_OK);
  EXPECT_EQ(ccstoi_settings_set(s, "metric.nonsense", "1"), CCSTOI_ERR_CONFIG);
  EXPECT_EQ(ccstoi_settings_set(s, "metric.beta_db", "loud"), CCSTOI_ERR_CONFIG);
  char* value = nullptr;
  ASSERT_EQ(ccstoi_settings_get(s, "metric.beta_db", &value), CCSTOI_OK);
  EXPECT_EQ(std::stod(value), -20.0);
  ccstoi_string_free(value);
  char* text = nullptr;
  ASSERT_EQ(ccstoi_settings_serialize(s, &text), CCSTOI_OK);
  EXPECT_NE(std::string(text).find("metric.beta_db"), std::string::npos);
  EXPECT_EQ(std::string(text).find("nonsense"), std::string::npos);
  ccstoi_string_free(text);
  ccstoi_settings_free(s);
}

TEST(CApi, ModelFillSaveLoadEnhance) {
  Scratch dir;
  ccstoi_settings* s = nullptr;
  ASSERT_EQ(ccstoi_settings_create(&s), CCSTOI_OK);
  ccstoi_model* model = nullptr;
  ASSERT_EQ(ccstoi_model_create(s, &model), CCSTOI_OK);
  EXPECT_GT(ccstoi_model_num_parameters(model), 1000u);
  ASSERT_EQ(ccstoi_model_fill_parameter(model, "head.weight", 0.0), CCSTOI_OK);
  ASSERT_EQ(ccstoi_model_fill_parameter(model, "head.bias", 40.0), CCSTOI_OK);
  EXPECT_EQ(ccstoi_model_fill_parameter(model, "no.such", 0.0), CCSTOI_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(ccstoi_model_save(model, (dir / "m.imsk").c_str()), CCSTOI_OK);
  ccstoi_model* loaded = nullptr;
  ASSERT_EQ(ccstoi_model_load((dir / "m.imsk").c_str(), &loaded), CCSTOI_OK);
  EXPECT_STREQ(ccstoi_model_config_hash(model), ccstoi_model_config_hash(loaded));
  EXPECT_EQ(std::string(ccstoi_model_config_hash(loaded)).size(), 16u);

  const Wave in = Speech(0.8, 7);
  ccstoi_waveform* raw = nullptr;
  ASSERT_EQ(ccstoi_model_enhance(loaded, in.get(), &raw), CCSTOI_OK);
  const Wave out(raw);
  ASSERT_EQ(ccstoi_waveform_length(out.get()), ccstoi_waveform_length(in.get()));
  const double* a = ccstoi_waveform_samples(in.get());
  const double* b = ccstoi_waveform_samples(out.get());
  double err = 0, ref = 0;
  for (size_t i = 512; i + 512 < ccstoi_waveform_length(in.get()); ++i) {
    err += (a[i] - b[i]) * (a[i] - b[i]);
    ref += a[i] * a[i];
  }
  EXPECT_LT(std::sqrt(err / ref), 0.01);

  ccstoi_waveform* empty = nullptr;
  const double none[1] = {0.0};
  ASSERT_EQ(ccstoi_waveform_create(none, 0, 16000, &empty), CCSTOI_OK);
  EXPECT_EQ(ccstoi_model_enhance(loaded, empty, &raw), CCSTOI_ERR_TOO_SHORT);
  ccstoi_waveform_free(empty);
  ccstoi_model_free(model);
  ccstoi_model_free(loaded);
  ccstoi_settings_free(s);
}

void OnLog(int level, const char* message, void* user) {
  if (level == 1) static_cast<std::vector<std::string>*>(user)->push_back(message);
}

TEST(CApi, LogCallbackReceivesResampleWarning) {
  std::vector<std::string> warnings;
  ccstoi_set_log_callback(OnLog, &warnings);
  ccstoi_settings* s = nullptr;
  ccstoi_settings_create(&s);
  ccstoi_model* model = nullptr;
  ASSERT_EQ(ccstoi_model_create(s, &model), CCSTOI_OK);
  const Wave in = Speech(0.3, 8, 8000);
  ccstoi_waveform* raw = nullptr;
  ASSERT_EQ(ccstoi_model_enhance(model, in.get(), &raw), CCSTOI_OK);
  ccstoi_waveform_free(raw);
  ccstoi_set_log_callback(nullptr, nullptr);
  EXPECT_EQ(warnings.size(), 1u);
  ccstoi_model_free(model);
  ccstoi_settings_free(s);
}

TEST(CApi, CorpusEvaluateScatterAndTrain) {
  Scratch dir;
  for (const char* spk : {"a", "b"}) {
    std::filesystem::create_directories(dir / (std::string("clean/") + spk));
    for (int u = 0; u < 2; ++u) {
      const Wave w = Speech(1.0, static_cast<uint64_t>(spk[0] * 10 + u));
      ccstoi_waveform_write(w.get(), (dir / (std::string("clean/") + spk + "/u" + std::to_string(u) + ".wav")).c_str());
    }
  }
  std::filesystem::create_directories(dir / "noise");
  ccstoi_waveform* raw = nullptr;
  ccstoi_white_noise(1.5, 9, 16000, 0.1, &raw);
  ccstoi_waveform_write(raw, (dir / "noise/white.wav").c_str());
  ccstoi_waveform_free(raw);

  ccstoi_settings* s = nullptr;
  ccstoi_settings_create(&s);
  ASSERT_EQ(ccstoi_settings_set(s, "corpus.snr_grid", "0,10"), CCSTOI_OK);
  ASSERT_EQ(ccstoi_settings_set(s, "corpus.train_speakers", "a"), CCSTOI_OK);
  ASSERT_EQ(ccstoi_settings_set(s, "corpus.test_speakers", "b"), CCSTOI_OK);
  ASSERT_EQ(ccstoi_settings_set(s, "train.epochs", "2"), CCSTOI_OK);
  size_t entries = 0;
  const std::string manifest = dir / "corpus/manifest.txt";
  ASSERT_EQ(ccstoi_build_corpus(s, (dir / "clean").c_str(), (dir / "noise").c_str(),
                                (dir / "corpus").c_str(), manifest.c_str(), 2, &entries),
            CCSTOI_OK)
      << ccstoi_last_error();
  EXPECT_EQ(entries, 8u);
  EXPECT_EQ(ccstoi_validate_manifest(manifest.c_str()), CCSTOI_OK);

  int epochs_seen = 0;
  ASSERT_EQ(ccstoi_train(s, manifest.c_str(), (dir / "best.imsk").c_str(), (dir / "last.imsk").c_str(),
                         [](const ccstoi_epoch_info*, void* user) { ++*static_cast<int*>(user); },
                         &epochs_seen),
            CCSTOI_OK)
      << ccstoi_last_error();
  EXPECT_EQ(epochs_seen, 2);
  ccstoi_model* model = nullptr;
  ASSERT_EQ(ccstoi_model_load((dir / "best.imsk").c_str(), &model), CCSTOI_OK);

  char* table = nullptr;
  ccstoi_eval_summary summary{};
  ASSERT_EQ(ccstoi_evaluate(s, manifest.c_str(), model, "noisy,enhanced", "test", 2,
                            (dir / "report.txt").c_str(), (dir / "report.jsonl").c_str(), nullptr,
                            &table, &summary),
            CCSTOI_OK)
      << ccstoi_last_error();
  EXPECT_EQ(summary.considered, 4u);
  EXPECT_EQ(summary.scored, 4u);
  EXPECT_EQ(summary.missing, 0u);
  EXPECT_NE(std::string(table).find(ccstoi_model_config_hash(model)), std::string::npos);
  ccstoi_string_free(table);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.jsonl"));

  double r = 0;
  size_t points = 0;
  ASSERT_EQ(ccstoi_scatter(s, manifest.c_str(), nullptr, "noisy", nullptr, 1,
                           (dir / "scatter.txt").c_str(), &r, &points),
            CCSTOI_OK);
  EXPECT_EQ(points, 8u);
  EXPECT_NEAR(r, 1.0, 1e-12);

  std::filesystem::remove(dir / "corpus/test/b_u0_white_0_noisy.wav");
  EXPECT_EQ(ccstoi_evaluate(s, manifest.c_str(), nullptr, "noisy", "test", 1, nullptr, nullptr,
                            nullptr, nullptr, &summary),
            CCSTOI_ERR_IO);
  EXPECT_EQ(summary.missing, 1u);
  EXPECT_EQ(summary.too_many_missing, 1);
  EXPECT_EQ(ccstoi_validate_manifest(manifest.c_str()), CCSTOI_ERR_IO);

  ASSERT_EQ(ccstoi_settings_set(s, "corpus.test_speakers", "a"), CCSTOI_OK);
  EXPECT_EQ(ccstoi_build_corpus(s, (dir / "clean").c_str(), (dir / "noise").c_str(),
                                (dir / "c2").c_str(), (dir / "c2/m.txt").c_str(), 1, &entries),
            CCSTOI_ERR_SPLIT);
  ccstoi_model_free(model);
  ccstoi_settings_free(s);
}

TEST(CApi, GradcheckReportsCorruption) {
  ccstoi_settings* s = nullptr;
  ccstoi_settings_create(&s);
  char* report = nullptr;
  EXPECT_EQ(ccstoi_gradcheck(s, "mse", 1, 32, 0, 0, &report), CCSTOI_OK);
  EXPECT_NE(std::string(report).find("PASS"), std::string::npos);
  ccstoi_string_free(report);
  EXPECT_EQ(ccstoi_gradcheck(s, "cc-stoi", 1, 32, 0, 1, &report), CCSTOI_ERR_CHECK_FAILED);
  EXPECT_NE(std::string(report).find("FAIL"), std::string::npos);
  ccstoi_string_free(report);
  ccstoi_settings_free(s);
}

}  // namespace
