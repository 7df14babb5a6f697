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

#ifndef CCSTOI_LOSS_LOSSES_H_
#define CCSTOI_LOSS_LOSSES_H_

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "metrics/intelligibility.h"
#include "octave/octave_bands.h"

namespace ccstoi {

// Loss value and its gradient with respect to the estimated magnitude.
struct LossValueGrad {
  double value = 0.0;
  Eigen::MatrixXd grad;
};

enum class LossKind { kMse, kStoi, kCcStoi };

const char* LossKindName(LossKind kind);
LossKind ParseLossKind(const std::string& name);

enum class MseForm {
  // (1/T) sum_t ||Yhat_t - Y_t||_2 over frames (columns).
  kFrameNorm,
  // (1/T) sum_t ||Yhat_t - Y_t||_2^2.
  kSquared,
};

LossValueGrad MseLoss(const Eigen::MatrixXd& estimate,
                      const Eigen::MatrixXd& target,
                      MseForm form = MseForm::kFrameNorm, double eps = 1e-12);

// Negated envelope intelligibility of `estimate` against `target` (both F x T
// magnitudes). The gradient is exact through the band-energy reduction, the
// norm-matching normalization and the correlation quotient; clipped entries
// pass no gradient. Requires the Pearson correlation kind.
//
// If `clip_margin` is non-null it receives, per band and frame, the smallest
// relative distance |u - c| / c between a normalized estimate entry u and its
// clip bound c over all segments containing that frame.
LossValueGrad CcStoiLoss(const Eigen::MatrixXd& estimate,
                         const Eigen::MatrixXd& target,
                         const OctaveBandMatrix& bands,
                         const MetricConfig& cfg,
                         Eigen::MatrixXd* clip_margin = nullptr);

// Dispatches on `kind`. The STOI loss is the modified-STOI objective, which
// shares the CC-STOI pipeline with the Pearson correlation.
LossValueGrad ComputeLoss(LossKind kind, const Eigen::MatrixXd& estimate,
                          const Eigen::MatrixXd& target,
                          const OctaveBandMatrix& bands,
                          const MetricConfig& cfg,
                          MseForm mse_form = MseForm::kFrameNorm);

// Mean of per-utterance losses; each gradient is scaled by 1 / batch size.
struct BatchLoss {
  double value = 0.0;
  std::vector<Eigen::MatrixXd> grads;
};
BatchLoss MeanOverBatch(const std::vector<LossValueGrad>& items);

// Central differences (f(x + h e) - f(x - h e)) / 2h for every entry.
Eigen::MatrixXd FiniteDiffGrad(
    const std::function<double(const Eigen::MatrixXd&)>& loss,
    const Eigen::MatrixXd& at, double h);

}  // namespace ccstoi

#endif  // CCSTOI_LOSS_LOSSES_H_
