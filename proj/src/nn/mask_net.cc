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

#include "nn/mask_net.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "common/error.h"
#include "common/rng.h"

namespace ccstoi::nn {
namespace {

struct ChannelPlan {
  int first, second;
  std::vector<int> encoder;  // per block
  std::vector<int> decoder;  // per block
};

ChannelPlan PlanChannels(const MaskNetConfig& cfg) {
  ChannelPlan plan;
  plan.first = cfg.base_channels;
  plan.second = 2 * cfg.base_channels;
  for (int k = 0; k < cfg.blocks; ++k) {
    plan.encoder.push_back(cfg.base_channels << std::min(k + 1, 2));
  }
  for (int k = 0; k < cfg.blocks; ++k) {
    const int mirror = cfg.blocks - 2 - k;
    plan.decoder.push_back(mirror >= 0 ? plan.encoder[mirror] : plan.second);
  }
  return plan;
}

}  // namespace

void MaskNetConfig::Validate() const {
  Require(base_channels >= 1, ErrorCode::kConfig, "net.base_channels must be >= 1");
  Require(blocks >= 1, ErrorCode::kConfig, "net.blocks must be >= 1");
  Require(first_stride >= 1 && second_stride >= 1, ErrorCode::kConfig,
          "net strides must be >= 1");
  Require(block_filter >= 1 && block_filter % 2 == 1, ErrorCode::kConfig,
          "net.block_filter must be odd");
  Require(decoder_filter >= first_stride && decoder_filter >= second_stride &&
              (decoder_filter - first_stride) % 2 == 0 &&
              (decoder_filter - second_stride) % 2 == 0,
          ErrorCode::kConfig,
          "net.decoder_filter must be >= both strides with even differences");
  Require(input_freq > 0 && input_freq % freq_reduction() == 0,
          ErrorCode::kConfig,
          "net.input_freq must be divisible by " +
              std::to_string(freq_reduction()));
}

KeyValueConfig MaskNetConfig::ToConfig() const {
  KeyValueConfig cfg;
  cfg.Set("net.base_channels", base_channels);
  cfg.Set("net.input_freq", input_freq);
  cfg.Set("net.first_stride", first_stride);
  cfg.Set("net.second_stride", second_stride);
  cfg.Set("net.blocks", blocks);
  cfg.Set("net.block_filter", block_filter);
  cfg.Set("net.decoder_filter", decoder_filter);
  cfg.Set("net.seed", static_cast<int64_t>(seed));
  return cfg;
}

MaskNetConfig MaskNetConfig::FromConfig(const KeyValueConfig& cfg) {
  MaskNetConfig out;
  out.base_channels = static_cast<int>(cfg.GetInt("net.base_channels", out.base_channels));
  out.input_freq = static_cast<int>(cfg.GetInt("net.input_freq", out.input_freq));
  out.first_stride = static_cast<int>(cfg.GetInt("net.first_stride", out.first_stride));
  out.second_stride = static_cast<int>(cfg.GetInt("net.second_stride", out.second_stride));
  out.blocks = static_cast<int>(cfg.GetInt("net.blocks", out.blocks));
  out.block_filter = static_cast<int>(cfg.GetInt("net.block_filter", out.block_filter));
  out.decoder_filter = static_cast<int>(cfg.GetInt("net.decoder_filter", out.decoder_filter));
  out.seed = static_cast<uint64_t>(cfg.GetInt("net.seed", 0));
  out.Validate();
  return out;
}

void RoundToFloat(std::vector<double>* values) {
  for (double& v : *values) v = static_cast<double>(static_cast<float>(v));
}

std::vector<ParameterInfo> MaskNet::Layout(const MaskNetConfig& cfg) {
  cfg.Validate();
  const ChannelPlan plan = PlanChannels(cfg);
  const int k = cfg.decoder_filter;
  const int kb = cfg.block_filter;
  std::vector<ParameterInfo> layout;
  size_t offset = 0;
  auto add = [&](const std::string& name, std::vector<int> shape) {
    size_t n = 1;
    for (int d : shape) n *= static_cast<size_t>(d);
    layout.push_back({name, std::move(shape), offset, n});
    offset += n;
  };
  add("enc1.weight", {plan.first, 1, k, k});
  add("enc1.bias", {plan.first});
  add("enc2.weight", {plan.second, plan.first, k, k});
  add("enc2.bias", {plan.second});
  for (int b = 0; b < cfg.blocks; ++b) {
    const int in = b == 0 ? plan.second : plan.encoder[b - 1];
    add("block" + std::to_string(b) + ".weight", {plan.encoder[b], in, kb, kb});
    add("block" + std::to_string(b) + ".bias", {plan.encoder[b]});
  }
  for (int b = 0; b < cfg.blocks; ++b) {
    const int below = b == 0 ? plan.encoder.back() : plan.decoder[b - 1];
    const int skip = plan.encoder[cfg.blocks - 1 - b];
    add("dec" + std::to_string(b) + ".weight",
        {plan.decoder[b], below + skip, kb, kb});
    add("dec" + std::to_string(b) + ".bias", {plan.decoder[b]});
  }
  add("up1.weight", {plan.decoder.back(), plan.first, k, k});
  add("up1.bias", {plan.first});
  add("head.weight", {2 * plan.first, 1, k, k});
  add("head.bias", {1});
  return layout;
}

MaskNet::MaskNet(const MaskNetConfig& cfg)
    : config_(cfg), layout_(Layout(cfg)) {
  parameters_.assign(layout_.back().offset + layout_.back().size, 0.0);
  Rng rng(MixSeed(cfg.seed, 0x1417));
  for (const ParameterInfo& p : layout_) {
    if (p.shape.size() != 4) continue;  // biases start at zero
    const bool transposed = p.name.rfind("up1", 0) == 0 || p.name.rfind("head", 0) == 0;
    const int fan_in = (transposed ? p.shape[0] : p.shape[1]) * p.shape[2] * p.shape[3];
    const double bound = std::sqrt(6.0 / fan_in);
    for (size_t i = 0; i < p.size; ++i) {
      parameters_[p.offset + i] = rng.Uniform(-bound, bound);
    }
  }
  RoundToFloat(&parameters_);
}

MaskNet::MaskNet(const MaskNetConfig& cfg, std::vector<double> parameters)
    : config_(cfg), layout_(Layout(cfg)), parameters_(std::move(parameters)) {
  Require(parameters_.size() == layout_.back().offset + layout_.back().size,
          ErrorCode::kShape,
          "parameter vector does not match the network layout");
}

const ParameterInfo& MaskNet::parameter(const std::string& name) const {
  for (const ParameterInfo& p : layout_) {
    if (p.name == name) return p;
  }
  Fail(ErrorCode::kInvalidArgument, "no parameter named " + name);
}

struct MaskNet::Graph {
  Tape tape;
  std::vector<Tensor> params;
  Tensor mask;
  Tensor enhanced;
};

void MaskNet::Build(Graph& g, const Eigen::MatrixXd& noisy_mag) const {
  Require(noisy_mag.allFinite(), ErrorCode::kNumeric,
          "noisy magnitude contains non-finite values");
  Require(noisy_mag.rows() >= 1 && noisy_mag.cols() >= 1, ErrorCode::kShape,
          "empty magnitude grid");
  const int bins = static_cast<int>(noisy_mag.rows());
  const int frames = static_cast<int>(noisy_mag.cols());
  const int reduction = config_.time_reduction();
  const int padded = (frames + reduction - 1) / reduction * reduction;

  Tape& tape = g.tape;
  for (const ParameterInfo& p : layout_) {
    g.params.push_back(tape.Leaf(
        p.shape, std::vector<double>(parameters_.begin() + p.offset,
                                     parameters_.begin() + p.offset + p.size)));
  }
  size_t next = 0;
  auto take = [&] { return g.params[next++]; };

  // Row-major (freq, time) copies of the input.
  std::vector<double> magnitude(static_cast<size_t>(bins) * frames);
  std::vector<double> features(magnitude.size());
  for (int f = 0; f < bins; ++f) {
    for (int t = 0; t < frames; ++t) {
      const double m = noisy_mag(f, t);
      magnitude[static_cast<size_t>(f) * frames + t] = m;
      features[static_cast<size_t>(f) * frames + t] = std::log1p(std::max(m, 0.0));
    }
  }
  const Tensor noisy = tape.Leaf({1, bins, frames}, std::move(magnitude));
  Tensor x = tape.Leaf({1, bins, frames}, std::move(features));
  x = CropPadFreq(x, config_.input_freq);
  x = ReflectPadTime(x, padded);

  const int k = config_.decoder_filter;
  const Stride2 s1{config_.first_stride, config_.first_stride};
  const Stride2 s2{config_.second_stride, config_.second_stride};
  const Stride2 p1{(k - s1.freq) / 2, (k - s1.time) / 2};
  const Stride2 p2{(k - s2.freq) / 2, (k - s2.time) / 2};
  const int half = config_.block_filter / 2;
  const Stride2 unit{1, 1};
  const Stride2 same{half, half};

  Tensor w = take(), b = take();
  const Tensor e1 = Relu(Conv2d(x, w, b, s1, p1));
  w = take(), b = take();
  Tensor h = Relu(Conv2d(e1, w, b, s2, p2));

  std::vector<Tensor> skips;
  for (int blk = 0; blk < config_.blocks; ++blk) {
    w = take(), b = take();
    h = Relu(Conv2d(h, w, b, unit, same));
    skips.push_back(h);
    h = AvgPoolFreq(h, 2);
  }
  for (int blk = 0; blk < config_.blocks; ++blk) {
    w = take(), b = take();
    h = ConcatChannels(UpsampleFreq(h, 2), skips[config_.blocks - 1 - blk]);
    h = Relu(Conv2d(h, w, b, unit, same));
  }
  w = take(), b = take();
  h = Relu(Conv2dTranspose(h, w, b, s2, p2));
  h = ConcatChannels(h, e1);
  w = take(), b = take();
  Tensor mask = Sigmoid(Conv2dTranspose(h, w, b, s1, p1));

  mask = CropTime(mask, frames);
  mask = CropPadFreq(mask, bins, PadMode::kEdge);
  g.mask = mask;
  g.enhanced = Mul(mask, noisy);
}

namespace {

Eigen::MatrixXd ToGrid(const Tensor& t) {
  const int rows = t.dim(1), cols = t.dim(2);
  Eigen::MatrixXd out(rows, cols);
  for (int f = 0; f < rows; ++f) {
    for (int c = 0; c < cols; ++c) {
      out(f, c) = t.value()[static_cast<size_t>(f) * cols + c];
    }
  }
  return out;
}

}  // namespace

MaskNet::Output MaskNet::Forward(const Eigen::MatrixXd& noisy_mag) const {
  Graph g;
  Build(g, noisy_mag);
  return {ToGrid(g.mask), ToGrid(g.enhanced)};
}

double MaskNet::Backprop(const Eigen::MatrixXd& noisy_mag, const LossFn& loss,
                         std::vector<double>* param_grad, Output* output) const {
  Graph g;
  Build(g, noisy_mag);
  const Eigen::MatrixXd enhanced = ToGrid(g.enhanced);
  const LossValueGrad lv = loss(enhanced);
  Require(lv.grad.rows() == enhanced.rows() && lv.grad.cols() == enhanced.cols(),
          ErrorCode::kShape, "loss gradient shape does not match the output");
  const int rows = static_cast<int>(enhanced.rows());
  const int cols = static_cast<int>(enhanced.cols());
  std::vector<double> seed(static_cast<size_t>(rows) * cols);
  for (int f = 0; f < rows; ++f) {
    for (int c = 0; c < cols; ++c) seed[static_cast<size_t>(f) * cols + c] = lv.grad(f, c);
  }
  g.tape.Backward(g.enhanced, seed);

  if (param_grad->empty()) param_grad->assign(parameters_.size(), 0.0);
  Require(param_grad->size() == parameters_.size(), ErrorCode::kShape,
          "gradient buffer does not match the parameter count");
  for (size_t i = 0; i < layout_.size(); ++i) {
    const std::vector<double>& grad = g.params[i].grad();
    for (size_t j = 0; j < grad.size(); ++j) {
      (*param_grad)[layout_[i].offset + j] += grad[j];
    }
  }
  if (output) *output = {ToGrid(g.mask), enhanced};
  return lv.value;
}

}  // namespace ccstoi::nn
