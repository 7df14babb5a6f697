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

#include "harness/settings.h"

#include <set>
#include <sstream>

#include "common/error.h"
#include "corpus/mix.h"

namespace ccstoi {
namespace {

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "seed",
      "stft.frame_len", "stft.hop", "stft.fft_len",
      "metric.mode", "metric.correlation", "metric.beta_db",
      "metric.segment_frames", "metric.eps", "metric.silence_db",
      "metric.cca_ridge",
      "net.base_channels", "net.input_freq", "net.first_stride",
      "net.second_stride", "net.blocks", "net.block_filter",
      "net.decoder_filter", "net.seed",
      "train.loss", "train.mse_form", "train.epochs", "train.batch_size",
      "train.lr", "train.beta1", "train.beta2", "train.adam_eps",
      "corpus.snr_grid", "corpus.train_speakers", "corpus.val_speakers",
      "corpus.test_speakers", "corpus.train_count", "corpus.val_count",
      "corpus.test_count",
      "eval.pesq_cmd",
  };
  return keys;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

const char* CorrelationName(CorrelationKind kind) {
  return kind == CorrelationKind::kCca ? "cca" : "pearson";
}

}  // namespace

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string JoinList(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

std::vector<double> ParseSnrGrid(const std::string& text) {
  const std::string t = Trim(text);
  if (t == "speech") return SnrGridSpeech();
  if (t == "nonspeech") return SnrGridNonSpeech();
  std::vector<double> grid;
  for (const std::string& item : SplitList(t)) {
    KeyValueConfig one;
    one.Set("snr", item);
    grid.push_back(one.GetDouble("snr", 0.0));
  }
  Require(!grid.empty(), ErrorCode::kConfig, "SNR grid '" + text + "' is empty");
  return grid;
}

Settings Settings::FromConfig(const KeyValueConfig& cfg) {
  for (const auto& [key, value] : cfg.entries()) {
    Require(KnownKeys().count(key) > 0, ErrorCode::kConfig,
            "unknown configuration key '" + key + "'");
  }
  Settings s;
  s.seed = static_cast<uint64_t>(cfg.GetInt("seed", 0));

  StftConfig& stft = s.metric.stft;
  stft.frame_len = static_cast<int>(cfg.GetInt("stft.frame_len", stft.frame_len));
  stft.hop = static_cast<int>(cfg.GetInt("stft.hop", stft.hop));
  stft.fft_len = static_cast<int>(cfg.GetInt("stft.fft_len", stft.fft_len));

  MetricConfig& m = s.metric;
  m.mode = ParseMetricMode(cfg.GetString("metric.mode", MetricModeName(m.mode)));
  const std::string corr = cfg.GetString("metric.correlation", "pearson");
  if (corr == "pearson") {
    m.correlation = CorrelationKind::kPearson;
  } else if (corr == "cca") {
    m.correlation = CorrelationKind::kCca;
  } else {
    Fail(ErrorCode::kConfig, "metric.correlation must be pearson or cca");
  }
  m.beta_db = cfg.GetDouble("metric.beta_db", m.beta_db);
  m.segment_frames = static_cast<int>(
      cfg.GetInt("metric.segment_frames", m.segment_frames));
  m.eps = cfg.GetDouble("metric.eps", m.eps);
  m.silence_db = cfg.GetDouble("metric.silence_db", m.silence_db);
  m.cca_ridge = cfg.GetDouble("metric.cca_ridge", m.cca_ridge);
  m.Validate();

  s.net = nn::MaskNetConfig::FromConfig(cfg);
  if (!cfg.Has("net.seed")) s.net.seed = s.seed;
  s.net.Validate();

  nn::TrainOptions& t = s.train;
  t.loss = ParseLossKind(cfg.GetString("train.loss", LossKindName(t.loss)));
  const std::string form = cfg.GetString("train.mse_form", "frame-norm");
  if (form == "frame-norm") {
    t.mse_form = MseForm::kFrameNorm;
  } else if (form == "squared") {
    t.mse_form = MseForm::kSquared;
  } else {
    Fail(ErrorCode::kConfig, "train.mse_form must be frame-norm or squared");
  }
  t.epochs = static_cast<int>(cfg.GetInt("train.epochs", t.epochs));
  t.batch_size = static_cast<int>(cfg.GetInt("train.batch_size", t.batch_size));
  t.adam.lr = cfg.GetDouble("train.lr", t.adam.lr);
  t.adam.beta1 = cfg.GetDouble("train.beta1", t.adam.beta1);
  t.adam.beta2 = cfg.GetDouble("train.beta2", t.adam.beta2);
  t.adam.eps = cfg.GetDouble("train.adam_eps", t.adam.eps);
  Require(t.epochs >= 1 && t.batch_size >= 1, ErrorCode::kConfig,
          "train.epochs and train.batch_size must be positive");
  Require(t.adam.lr > 0 && t.adam.beta1 >= 0 && t.adam.beta1 < 1 &&
              t.adam.beta2 >= 0 && t.adam.beta2 < 1 && t.adam.eps > 0,
          ErrorCode::kConfig, "invalid Adam settings");
  t.metric = s.metric;
  t.seed = s.seed;

  if (cfg.Has("corpus.snr_grid")) {
    s.snr_grid = ParseSnrGrid(cfg.GetString("corpus.snr_grid", ""));
  }
  s.split.train = SplitList(cfg.GetString("corpus.train_speakers", ""));
  s.split.val = SplitList(cfg.GetString("corpus.val_speakers", ""));
  s.split.test = SplitList(cfg.GetString("corpus.test_speakers", ""));
  s.split.train_count = static_cast<int>(cfg.GetInt("corpus.train_count", 0));
  s.split.val_count = static_cast<int>(cfg.GetInt("corpus.val_count", 0));
  s.split.test_count = static_cast<int>(cfg.GetInt("corpus.test_count", 0));

  s.pesq_cmd = cfg.GetString("eval.pesq_cmd", "");
  return s;
}

KeyValueConfig Settings::ToConfig() const {
  KeyValueConfig cfg = net.ToConfig();
  cfg.Set("seed", static_cast<int64_t>(seed));
  cfg.Set("stft.frame_len", metric.stft.frame_len);
  cfg.Set("stft.hop", metric.stft.hop);
  cfg.Set("stft.fft_len", metric.stft.fft_len);
  cfg.Set("metric.mode", std::string(MetricModeName(metric.mode)));
  cfg.Set("metric.correlation", std::string(CorrelationName(metric.correlation)));
  cfg.Set("metric.beta_db", metric.beta_db);
  cfg.Set("metric.segment_frames", metric.segment_frames);
  cfg.Set("metric.eps", metric.eps);
  cfg.Set("metric.silence_db", metric.silence_db);
  cfg.Set("metric.cca_ridge", metric.cca_ridge);
  cfg.Set("train.loss", std::string(LossKindName(train.loss)));
  cfg.Set("train.mse_form", std::string(train.mse_form == MseForm::kSquared
                                             ? "squared"
                                             : "frame-norm"));
  cfg.Set("train.epochs", train.epochs);
  cfg.Set("train.batch_size", train.batch_size);
  cfg.Set("train.lr", train.adam.lr);
  cfg.Set("train.beta1", train.adam.beta1);
  cfg.Set("train.beta2", train.adam.beta2);
  cfg.Set("train.adam_eps", train.adam.eps);
  std::vector<std::string> grid;
  for (double v : snr_grid) grid.push_back(FormatDouble(v));
  cfg.Set("corpus.snr_grid", JoinList(grid));
  cfg.Set("corpus.train_speakers", JoinList(split.train));
  cfg.Set("corpus.val_speakers", JoinList(split.val));
  cfg.Set("corpus.test_speakers", JoinList(split.test));
  cfg.Set("corpus.train_count", split.train_count);
  cfg.Set("corpus.val_count", split.val_count);
  cfg.Set("corpus.test_count", split.test_count);
  cfg.Set("eval.pesq_cmd", pesq_cmd);
  return cfg;
}

}  // namespace ccstoi
