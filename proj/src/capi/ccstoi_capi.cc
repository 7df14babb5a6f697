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

#include "ccstoi/ccstoi.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <new>
#include <sstream>
#include <string>

#include "common/config.h"
#include "common/error.h"
#include "common/log.h"
#include "corpus/manifest.h"
#include "corpus/mix.h"
#include "harness/dataset.h"
#include "harness/enhance.h"
#include "harness/evaluate.h"
#include "harness/gradcheck.h"
#include "harness/scatter.h"
#include "harness/settings.h"
#include "metrics/intelligibility.h"
#include "nn/checkpoint.h"
#include "nn/mask_net.h"
#include "nn/trainer.h"
#include "signal/resample.h"
#include "signal/synthetic.h"
#include "signal/wav.h"

struct ccstoi_waveform {
  ccstoi::Waveform wave;
};

struct ccstoi_settings {
  ccstoi::KeyValueConfig config;
  ccstoi::Settings settings;
};

struct ccstoi_model {
  ccstoi::nn::Checkpoint checkpoint;
  std::unique_ptr<ccstoi::nn::MaskNet> net;
  std::string hash;
};

namespace {

using ccstoi::Error;
using ccstoi::ErrorCode;

static_assert(static_cast<int>(ErrorCode::kCheckFailed) == CCSTOI_ERR_CHECK_FAILED &&
              static_cast<int>(ErrorCode::kIo) == CCSTOI_ERR_IO &&
              static_cast<int>(ErrorCode::kInvalidArgument) ==
                  CCSTOI_ERR_INVALID_ARGUMENT);

thread_local std::string g_last_error;

std::mutex g_log_mutex;
ccstoi_log_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

void LogSink(ccstoi::LogLevel level, const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  if (g_log_fn) g_log_fn(static_cast<int>(level), msg.c_str(), g_log_user);
}

ccstoi::LogFn Logger() { return LogSink; }

template <typename Fn>
ccstoi_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return CCSTOI_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<ccstoi_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CCSTOI_ERR_INTERNAL;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return CCSTOI_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CCSTOI_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CCSTOI_ERR_INTERNAL;
  }
}

void NotNull(const void* p, const char* what) {
  ccstoi::Require(p != nullptr, ErrorCode::kInvalidArgument,
                  std::string(what) + " must not be NULL");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ccstoi::Settings SettingsOrDefault(const ccstoi_settings* s) {
  return s ? s->settings : ccstoi::Settings::FromConfig({});
}

ccstoi_waveform* Wrap(ccstoi::Waveform w) {
  return new ccstoi_waveform{std::move(w)};
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) ccstoi::Fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  out << text;
  if (!out) ccstoi::Fail(ErrorCode::kIo, "write failed for " + path);
}

// Metadata stored with trained checkpoints so that enhancement and
// evaluation reuse the training front end.
ccstoi::KeyValueConfig CheckpointMetadata(const ccstoi::Settings& s) {
  ccstoi::KeyValueConfig all = s.ToConfig();
  ccstoi::KeyValueConfig meta;
  for (const auto& [key, value] : all.entries()) {
    if (key.rfind("stft.", 0) == 0 || key.rfind("metric.", 0) == 0 ||
        key.rfind("train.", 0) == 0 || key == "seed") {
      meta.Set(key, value);
    }
  }
  return meta;
}

ccstoi::StftConfig ModelStft(const ccstoi_model* m) {
  ccstoi::StftConfig stft = ccstoi::DefaultStftConfig();
  const ccstoi::KeyValueConfig& meta = m->checkpoint.metadata;
  stft.frame_len = static_cast<int>(meta.GetInt("stft.frame_len", stft.frame_len));
  stft.hop = static_cast<int>(meta.GetInt("stft.hop", stft.hop));
  stft.fft_len = static_cast<int>(meta.GetInt("stft.fft_len", stft.fft_len));
  stft.Validate();
  return stft;
}

ccstoi_model* MakeModel(ccstoi::nn::Checkpoint ckpt) {
  auto m = std::make_unique<ccstoi_model>();
  m->checkpoint = std::move(ckpt);
  m->net = std::make_unique<ccstoi::nn::MaskNet>(m->checkpoint.net,
                                                 m->checkpoint.parameters);
  m->hash = m->checkpoint.ConfigHash();
  return m.release();
}

std::vector<ccstoi::Condition> ParseConditions(const char* text, bool have_model) {
  std::vector<ccstoi::Condition> out;
  if (!text) {
    out.push_back(ccstoi::Condition::kNoisy);
    if (have_model) out.push_back(ccstoi::Condition::kEnhanced);
    return out;
  }
  for (const std::string& item : ccstoi::SplitList(text)) {
    out.push_back(ccstoi::ParseCondition(item));
  }
  ccstoi::Require(!out.empty(), ErrorCode::kInvalidArgument,
                  "no conditions given");
  return out;
}

ccstoi::EvalOptions MakeEvalOptions(const ccstoi_settings* settings,
                                    const ccstoi_model* model,
                                    const char* conditions, const char* split,
                                    int jobs) {
  const ccstoi::Settings s = SettingsOrDefault(settings);
  ccstoi::EvalOptions opts;
  opts.conditions = ParseConditions(conditions, model != nullptr);
  opts.metric = s.metric;
  opts.pesq_cmd = s.pesq_cmd;
  opts.jobs = jobs;
  opts.log = Logger();
  if (split) opts.split = ccstoi::ParseSplit(split);
  if (model) {
    opts.net = model->net.get();
    opts.config_hash = model->hash;
    opts.loss_label = model->checkpoint.metadata.GetString("train.loss", "");
    opts.metric.stft = ModelStft(model);
  }
  return opts;
}

}  // namespace

extern "C" {

const char* ccstoi_version(void) { return "1.0.0"; }

const char* ccstoi_status_name(ccstoi_status status) {
  switch (status) {
    case CCSTOI_OK: return "ok";
    case CCSTOI_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CCSTOI_ERR_FORMAT: return "format";
    case CCSTOI_ERR_UNSUPPORTED_FORMAT: return "unsupported-format";
    case CCSTOI_ERR_SHAPE: return "shape";
    case CCSTOI_ERR_TOO_SHORT: return "too-short";
    case CCSTOI_ERR_EMPTY_SIGNAL: return "empty-signal";
    case CCSTOI_ERR_CONFIG: return "config";
    case CCSTOI_ERR_SPLIT: return "split";
    case CCSTOI_ERR_DEGENERATE_NOISE: return "degenerate-noise";
    case CCSTOI_ERR_NUMERIC: return "numeric";
    case CCSTOI_ERR_IO: return "io";
    case CCSTOI_ERR_UNDEFINED_METRIC: return "undefined-metric";
    case CCSTOI_ERR_CHECK_FAILED: return "check-failed";
    case CCSTOI_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* ccstoi_last_error(void) { return g_last_error.c_str(); }

void ccstoi_set_log_callback(ccstoi_log_fn fn, void* user) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  g_log_fn = fn;
  g_log_user = user;
}

void ccstoi_string_free(char* s) { std::free(s); }

ccstoi_status ccstoi_waveform_create(const double* samples, size_t length,
                                     int sample_rate, ccstoi_waveform** out) {
  return Guard([&] {
    NotNull(out, "out");
    ccstoi::Require(length == 0 || samples != nullptr,
                    ErrorCode::kInvalidArgument, "samples must not be NULL");
    ccstoi::Require(sample_rate > 0, ErrorCode::kInvalidArgument,
                    "sample rate must be positive");
    ccstoi::Waveform w;
    w.sample_rate = sample_rate;
    w.samples.assign(samples, samples + length);
    *out = Wrap(std::move(w));
  });
}

ccstoi_status ccstoi_waveform_read(const char* path, ccstoi_waveform** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = Wrap(ccstoi::ReadWav(path));
  });
}

ccstoi_status ccstoi_waveform_write(const ccstoi_waveform* wave,
                                    const char* path) {
  return Guard([&] {
    NotNull(wave, "wave");
    NotNull(path, "path");
    ccstoi::WriteWav(wave->wave, path);
  });
}

void ccstoi_waveform_free(ccstoi_waveform* wave) { delete wave; }

size_t ccstoi_waveform_length(const ccstoi_waveform* wave) {
  return wave ? wave->wave.size() : 0;
}

int ccstoi_waveform_rate(const ccstoi_waveform* wave) {
  return wave ? wave->wave.sample_rate : 0;
}

const double* ccstoi_waveform_samples(const ccstoi_waveform* wave) {
  return wave ? wave->wave.samples.data() : nullptr;
}

ccstoi_status ccstoi_waveform_resample(const ccstoi_waveform* wave,
                                       int target_rate, ccstoi_waveform** out) {
  return Guard([&] {
    NotNull(wave, "wave");
    NotNull(out, "out");
    *out = Wrap(ccstoi::Resample(wave->wave, target_rate));
  });
}

ccstoi_status ccstoi_synthetic_speech(double duration_s, uint64_t seed,
                                      int sample_rate, ccstoi_waveform** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = Wrap(ccstoi::SyntheticSpeech(duration_s, seed, sample_rate));
  });
}

ccstoi_status ccstoi_white_noise(double duration_s, uint64_t seed,
                                 int sample_rate, double stddev,
                                 ccstoi_waveform** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = Wrap(ccstoi::WhiteNoise(duration_s, seed, sample_rate, stddev));
  });
}

ccstoi_status ccstoi_mix_at_snr(const ccstoi_waveform* clean,
                                const ccstoi_waveform* noise, double snr_db,
                                uint64_t seed, ccstoi_waveform** mixture_out,
                                ccstoi_waveform** clean_out, double* gain,
                                double* scale) {
  return Guard([&] {
    NotNull(clean, "clean");
    NotNull(noise, "noise");
    NotNull(mixture_out, "mixture_out");
    ccstoi::MixResult mix = ccstoi::MixAtSnr(clean->wave, noise->wave, snr_db, seed);
    std::unique_ptr<ccstoi_waveform> m(Wrap(std::move(mix.mixture)));
    if (clean_out) *clean_out = Wrap(std::move(mix.clean));
    if (gain) *gain = mix.gain;
    if (scale) *scale = mix.scale;
    *mixture_out = m.release();
  });
}

ccstoi_status ccstoi_settings_create(ccstoi_settings** out) {
  return Guard([&] {
    NotNull(out, "out");
    auto s = std::make_unique<ccstoi_settings>();
    s->settings = ccstoi::Settings::FromConfig(s->config);
    *out = s.release();
  });
}

ccstoi_status ccstoi_settings_load(const char* path, ccstoi_settings** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    auto s = std::make_unique<ccstoi_settings>();
    s->config = ccstoi::KeyValueConfig::Load(path);
    s->settings = ccstoi::Settings::FromConfig(s->config);
    *out = s.release();
  });
}

void ccstoi_settings_free(ccstoi_settings* settings) { delete settings; }

ccstoi_status ccstoi_settings_set(ccstoi_settings* settings, const char* key,
                                  const char* value) {
  return Guard([&] {
    NotNull(settings, "settings");
    NotNull(key, "key");
    NotNull(value, "value");
    ccstoi::KeyValueConfig next = settings->config;
    next.Set(key, std::string(value));
    ccstoi::Settings parsed = ccstoi::Settings::FromConfig(next);
    settings->config = std::move(next);
    settings->settings = std::move(parsed);
  });
}

ccstoi_status ccstoi_settings_get(const ccstoi_settings* settings,
                                  const char* key, char** value) {
  return Guard([&] {
    NotNull(settings, "settings");
    NotNull(key, "key");
    NotNull(value, "value");
    const ccstoi::KeyValueConfig all = settings->settings.ToConfig();
    ccstoi::Require(all.Has(key), ErrorCode::kConfig,
                    std::string("unknown configuration key '") + key + "'");
    *value = CopyString(all.GetString(key, ""));
  });
}

ccstoi_status ccstoi_settings_serialize(const ccstoi_settings* settings,
                                        char** text) {
  return Guard([&] {
    NotNull(settings, "settings");
    NotNull(text, "text");
    *text = CopyString(settings->settings.ToConfig().Serialize());
  });
}

ccstoi_status ccstoi_metric(const ccstoi_settings* settings, const char* metric,
                            const ccstoi_waveform* clean,
                            const ccstoi_waveform* estimate, double* out) {
  return Guard([&] {
    NotNull(metric, "metric");
    NotNull(clean, "clean");
    NotNull(estimate, "estimate");
    NotNull(out, "out");
    const std::string name = metric;
    if (name == "sdi") {
      *out = ccstoi::Sdi(clean->wave, estimate->wave);
      return;
    }
    ccstoi::MetricConfig cfg = SettingsOrDefault(settings).metric;
    cfg.mode = ccstoi::ParseMetricMode(name);
    *out = ccstoi::Intelligibility(clean->wave, estimate->wave, cfg);
  });
}

ccstoi_status ccstoi_build_corpus(const ccstoi_settings* settings,
                                  const char* clean_dir, const char* noise_dir,
                                  const char* out_dir,
                                  const char* manifest_path, int jobs,
                                  size_t* entries) {
  return Guard([&] {
    NotNull(clean_dir, "clean_dir");
    NotNull(noise_dir, "noise_dir");
    NotNull(out_dir, "out_dir");
    NotNull(manifest_path, "manifest_path");
    const ccstoi::Settings s = SettingsOrDefault(settings);
    ccstoi::CorpusLayout layout{clean_dir, noise_dir, out_dir};
    ccstoi::Manifest manifest =
        ccstoi::BuildManifest(layout, s.snr_grid, s.split, s.seed);
    ccstoi::ForgeCorpus(&manifest, jobs);
    // Entry paths are relative to out_dir; store them relative to the
    // manifest's own directory instead.
    const std::filesystem::path mdir =
        std::filesystem::absolute(manifest_path).parent_path();
    const std::filesystem::path odir = std::filesystem::absolute(out_dir);
    if (mdir.lexically_normal() != odir.lexically_normal()) {
      for (ccstoi::ManifestEntry& e : manifest.entries) {
        e.clean_path = (odir / e.clean_path).lexically_relative(mdir).string();
        e.noisy_path = (odir / e.noisy_path).lexically_relative(mdir).string();
      }
    }
    ccstoi::SaveManifest(manifest, manifest_path);
    ccstoi::Log(Logger(), ccstoi::LogLevel::kInfo,
                "wrote " + std::to_string(manifest.entries.size()) +
                    " entries to " + manifest_path);
    if (entries) *entries = manifest.entries.size();
  });
}

ccstoi_status ccstoi_validate_manifest(const char* manifest_path) {
  return Guard([&] {
    NotNull(manifest_path, "manifest_path");
    ccstoi::ValidateManifest(ccstoi::LoadManifest(manifest_path));
  });
}

ccstoi_status ccstoi_train(const ccstoi_settings* settings,
                           const char* manifest_path,
                           const char* checkpoint_path, const char* last_path,
                           ccstoi_epoch_fn on_epoch, void* user) {
  return Guard([&] {
    NotNull(manifest_path, "manifest_path");
    NotNull(checkpoint_path, "checkpoint_path");
    const ccstoi::Settings s = SettingsOrDefault(settings);
    const ccstoi::Manifest manifest = ccstoi::LoadManifest(manifest_path);
    ccstoi::ValidateManifest(manifest);
    const ccstoi::LogFn log = Logger();
    const auto train = ccstoi::LoadExamples(manifest, ccstoi::Split::kTrain,
                                            s.metric.stft, log);
    const auto val = ccstoi::LoadExamples(manifest, ccstoi::Split::kVal,
                                          s.metric.stft, log);
    ccstoi::Require(!train.empty(), ErrorCode::kInvalidArgument,
                    "manifest has no train entries");
    ccstoi::nn::TrainOptions opts = s.train;
    opts.metadata = CheckpointMetadata(s);
    const ccstoi::nn::TrainResult result = ccstoi::nn::Train(
        s.net, train, val, opts, [&](const ccstoi::nn::EpochLog& e) {
          if (on_epoch) {
            const ccstoi_epoch_info info{e.epoch,   e.train_loss, e.train_cc_stoi,
                                         e.val_loss, e.val_cc_stoi, e.best ? 1 : 0};
            on_epoch(&info, user);
          }
        });
    ccstoi::nn::SaveCheckpoint(result.best, checkpoint_path);
    if (last_path) ccstoi::nn::SaveCheckpoint(result.last, last_path);
  });
}

ccstoi_status ccstoi_model_create(const ccstoi_settings* settings,
                                  ccstoi_model** out) {
  return Guard([&] {
    NotNull(out, "out");
    const ccstoi::Settings s = SettingsOrDefault(settings);
    ccstoi::nn::Checkpoint ckpt;
    ckpt.net = s.net;
    ckpt.metadata = CheckpointMetadata(s);
    ckpt.parameters = ccstoi::nn::MaskNet(s.net).parameters();
    *out = MakeModel(std::move(ckpt));
  });
}

ccstoi_status ccstoi_model_load(const char* path, ccstoi_model** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = MakeModel(ccstoi::nn::LoadCheckpoint(path));
  });
}

ccstoi_status ccstoi_model_save(const ccstoi_model* model, const char* path) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(path, "path");
    ccstoi::nn::SaveCheckpoint(model->checkpoint, path);
  });
}

void ccstoi_model_free(ccstoi_model* model) { delete model; }

const char* ccstoi_model_config_hash(const ccstoi_model* model) {
  return model ? model->hash.c_str() : "";
}

size_t ccstoi_model_num_parameters(const ccstoi_model* model) {
  return model ? model->checkpoint.parameters.size() : 0;
}

ccstoi_status ccstoi_model_fill_parameter(ccstoi_model* model, const char* name,
                                          double value) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(name, "name");
    ccstoi::Require(std::isfinite(value), ErrorCode::kInvalidArgument,
                    "parameter value must be finite");
    const ccstoi::nn::ParameterInfo& info = model->net->parameter(name);
    std::vector<double> params = model->checkpoint.parameters;
    std::fill(params.begin() + info.offset,
              params.begin() + info.offset + info.size, value);
    ccstoi::nn::RoundToFloat(&params);
    model->net = std::make_unique<ccstoi::nn::MaskNet>(model->checkpoint.net, params);
    model->checkpoint.parameters = std::move(params);
  });
}

ccstoi_status ccstoi_model_enhance(const ccstoi_model* model,
                                   const ccstoi_waveform* noisy,
                                   ccstoi_waveform** out) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(noisy, "noisy");
    NotNull(out, "out");
    *out = Wrap(ccstoi::EnhanceWaveform(*model->net, noisy->wave,
                                        ModelStft(model), Logger()));
  });
}

ccstoi_status ccstoi_evaluate(const ccstoi_settings* settings,
                              const char* manifest_path,
                              const ccstoi_model* model,
                              const char* conditions, const char* split,
                              int jobs, const char* table_path,
                              const char* jsonl_path, const char* output_dir,
                              char** table_text, ccstoi_eval_summary* summary) {
  return Guard([&] {
    NotNull(manifest_path, "manifest_path");
    const ccstoi::Manifest manifest = ccstoi::LoadManifest(manifest_path);
    ccstoi::ValidateManifest(manifest, /*check_files=*/false);
    ccstoi::EvalOptions opts =
        MakeEvalOptions(settings, model, conditions, split, jobs);
    if (output_dir) opts.output_dir = output_dir;
    const ccstoi::MetricReport report = ccstoi::Evaluate(manifest, opts);
    const std::string table = ccstoi::FormatReportTable(report);
    if (table_path) WriteText(table_path, table);
    if (table_text) *table_text = CopyString(table);
    if (jsonl_path) WriteText(jsonl_path, ccstoi::FormatReportJsonLines(report));
    if (summary) {
      summary->considered = report.considered;
      summary->scored = report.considered - report.missing.size();
      summary->missing = report.missing.size();
      summary->too_many_missing = report.TooManyMissing() ? 1 : 0;
    }
    ccstoi::Require(!report.TooManyMissing(), ErrorCode::kIo,
                    std::to_string(report.missing.size()) + " of " +
                        std::to_string(report.considered) +
                        " entries have missing files");
  });
}

ccstoi_status ccstoi_scatter(const ccstoi_settings* settings,
                             const char* manifest_path,
                             const ccstoi_model* model, const char* conditions,
                             const char* split, int jobs, const char* out_path,
                             double* pearson_r, size_t* points) {
  return Guard([&] {
    NotNull(manifest_path, "manifest_path");
    const ccstoi::Manifest manifest = ccstoi::LoadManifest(manifest_path);
    const ccstoi::EvalOptions opts = MakeEvalOptions(
        settings, model, conditions ? conditions : "noisy", split, jobs);
    const ccstoi::ScatterData data = ccstoi::Scatter(manifest, opts);
    if (out_path) WriteText(out_path, ccstoi::FormatScatter(data));
    if (pearson_r) {
      *pearson_r = data.pearson_r ? *data.pearson_r
                                  : std::numeric_limits<double>::quiet_NaN();
    }
    if (points) *points = data.points.size();
  });
}

ccstoi_status ccstoi_gradcheck(const ccstoi_settings* settings,
                               const char* losses, uint64_t seed, int frames,
                               int network, int corrupt_gradient,
                               char** report) {
  std::string text;
  bool passed = false;
  const ccstoi_status status = Guard([&] {
    const ccstoi::Settings s = SettingsOrDefault(settings);
    ccstoi::GradCheckOptions opts;
    if (losses) {
      opts.losses.clear();
      for (const std::string& item : ccstoi::SplitList(losses)) {
        opts.losses.push_back(ccstoi::ParseLossKind(item));
      }
    }
    opts.mse_form = s.train.mse_form;
    opts.metric = s.metric;
    opts.metric.correlation = ccstoi::CorrelationKind::kPearson;
    opts.net = s.net;
    opts.seed = seed;
    if (frames > 0) opts.frames = frames;
    opts.network = network != 0;
    opts.corrupt_gradient = corrupt_gradient != 0;
    const ccstoi::GradCheckReport r = ccstoi::RunGradCheck(opts);
    text = r.Format();
    passed = r.pass();
    if (report) *report = CopyString(text);
  });
  if (status != CCSTOI_OK) return status;
  if (!passed) {
    g_last_error = "gradient check exceeded its tolerance";
    return CCSTOI_ERR_CHECK_FAILED;
  }
  return CCSTOI_OK;
}

}  // extern "C"
