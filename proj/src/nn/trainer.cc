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

#include "nn/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "common/error.h"
#include "common/rng.h"
#include "octave/octave_bands.h"

namespace ccstoi::nn {
namespace {

Checkpoint Snapshot(const MaskNet& net, const Adam& adam, int epoch,
                    const Rng& rng, const TrainOptions& options) {
  Checkpoint ckpt;
  ckpt.net = net.config();
  ckpt.metadata = options.metadata;
  ckpt.metadata.Set("train.loss", std::string(LossKindName(options.loss)));
  ckpt.parameters = net.parameters();
  ckpt.optimizer = adam.state();
  ckpt.epoch = epoch;
  ckpt.rng_state = rng.SaveState();
  return ckpt;
}

}  // namespace

Evaluation EvaluateNetwork(const MaskNet& net,
                           const std::vector<TrainingExample>& examples,
                           const TrainOptions& options) {
  Evaluation out;
  if (examples.empty()) return out;
  const OctaveBandMatrix bands =
      BuildBandMatrix(options.sample_rate, options.metric.stft.fft_len);
  MetricConfig pearson = options.metric;
  pearson.correlation = CorrelationKind::kPearson;
  for (const TrainingExample& ex : examples) {
    const MaskNet::Output o = net.Forward(ex.noisy);
    out.loss += ComputeLoss(options.loss, o.enhanced, ex.clean, bands, pearson,
                            options.mse_form)
                    .value;
    out.cc_stoi += SpectralIntelligibility(ex.clean, o.enhanced, bands, pearson);
  }
  out.loss /= static_cast<double>(examples.size());
  out.cc_stoi /= static_cast<double>(examples.size());
  return out;
}

TrainResult Train(const MaskNetConfig& net_config,
                  const std::vector<TrainingExample>& train,
                  const std::vector<TrainingExample>& validation,
                  const TrainOptions& options,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  Require(!train.empty(), ErrorCode::kInvalidArgument,
          "training set is empty");
  Require(options.epochs >= 1 && options.batch_size >= 1, ErrorCode::kConfig,
          "epochs and batch size must be >= 1");
  for (const TrainingExample& ex : train) {
    Require(ex.noisy.rows() == ex.clean.rows() && ex.noisy.cols() == ex.clean.cols(),
            ErrorCode::kShape, "example " + ex.id + " has mismatched grids");
  }
  const OctaveBandMatrix bands =
      BuildBandMatrix(options.sample_rate, options.metric.stft.fft_len);
  MetricConfig pearson = options.metric;
  pearson.correlation = CorrelationKind::kPearson;

  MaskNet net(net_config);
  Adam adam(net.num_parameters(), options.adam);
  Rng rng(MixSeed(options.seed, 0x7a1));

  TrainResult result;
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<size_t> order(train.size());
  std::vector<double> grad;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.Below(i)]);
    }

    double epoch_loss = 0.0;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(options.batch_size)) {
      const size_t end =
          std::min(order.size(), start + static_cast<size_t>(options.batch_size));
      const double inv = 1.0 / static_cast<double>(end - start);
      grad.assign(net.num_parameters(), 0.0);
      for (size_t k = start; k < end; ++k) {
        const TrainingExample& ex = train[order[k]];
        const double value = net.Backprop(
            ex.noisy,
            [&](const Eigen::MatrixXd& enhanced) {
              LossValueGrad lv = ComputeLoss(options.loss, enhanced, ex.clean,
                                             bands, pearson, options.mse_form);
              lv.grad *= inv;
              return lv;
            },
            &grad);
        if (!std::isfinite(value)) {
          Fail(ErrorCode::kNumeric,
               "training diverged at epoch " + std::to_string(epoch) +
                   " on example " + ex.id + " (non-finite loss)");
        }
        epoch_loss += value;
      }
      for (double g : grad) {
        if (!std::isfinite(g)) {
          Fail(ErrorCode::kNumeric, "training diverged at epoch " +
                                        std::to_string(epoch) +
                                        " (non-finite gradient)");
        }
      }
      adam.Step(&net.parameters(), grad);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss / static_cast<double>(train.size());
    const Evaluation after = EvaluateNetwork(net, train, options);
    entry.train_cc_stoi = after.cc_stoi;
    double score = after.loss;
    if (!validation.empty()) {
      const Evaluation val = EvaluateNetwork(net, validation, options);
      entry.val_loss = val.loss;
      entry.val_cc_stoi = val.cc_stoi;
      score = val.loss;
    } else {
      entry.val_loss = std::numeric_limits<double>::quiet_NaN();
      entry.val_cc_stoi = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(score)) {
      Fail(ErrorCode::kNumeric,
           "training diverged at epoch " + std::to_string(epoch));
    }
    result.last = Snapshot(net, adam, epoch + 1, rng, options);
    if (score < best_score) {
      best_score = score;
      entry.best = true;
      result.best = result.last;
    }
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  return result;
}

}  // namespace ccstoi::nn
