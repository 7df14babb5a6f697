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

#ifndef CCSTOI_NN_TRAINER_H_
#define CCSTOI_NN_TRAINER_H_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "common/config.h"
#include "loss/losses.h"
#include "metrics/intelligibility.h"
#include "nn/adam.h"
#include "nn/checkpoint.h"
#include "nn/mask_net.h"

namespace ccstoi::nn {

// One utterance as paired magnitude spectrograms of equal shape.
struct TrainingExample {
  std::string id;
  Eigen::MatrixXd noisy;
  Eigen::MatrixXd clean;
};

struct TrainOptions {
  LossKind loss = LossKind::kCcStoi;
  MseForm mse_form = MseForm::kFrameNorm;
  AdamConfig adam;
  int epochs = 20;
  int batch_size = 1;
  uint64_t seed = 0;
  // Band layout and segment settings for the intelligibility losses and the
  // per-epoch CC-STOI figures.
  MetricConfig metric;
  int sample_rate = 16000;
  // Copied into every checkpoint produced.
  KeyValueConfig metadata;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;      // mean over the epoch's steps
  double train_cc_stoi = 0.0;   // after the epoch, spectral domain
  double val_loss = 0.0;        // NaN without a validation set
  double val_cc_stoi = 0.0;     // NaN without a validation set
  bool best = false;
};

struct TrainResult {
  Checkpoint best;
  Checkpoint last;
  std::vector<EpochLog> log;
};

// Trains a freshly initialized network. Example order is reshuffled every
// epoch from the seeded generator; batch gradients are summed in a fixed
// order. The best checkpoint minimizes validation loss (training loss when
// there is no validation set). Throws kNumeric if the loss diverges.
TrainResult Train(const MaskNetConfig& net_config,
                  const std::vector<TrainingExample>& train,
                  const std::vector<TrainingExample>& validation,
                  const TrainOptions& options,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

struct Evaluation {
  double loss = 0.0;
  double cc_stoi = 0.0;
};

// Mean loss and spectral-domain CC-STOI of the network over `examples`.
Evaluation EvaluateNetwork(const MaskNet& net,
                           const std::vector<TrainingExample>& examples,
                           const TrainOptions& options);

}  // namespace ccstoi::nn

#endif  // CCSTOI_NN_TRAINER_H_
