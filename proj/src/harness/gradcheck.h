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

#ifndef CCSTOI_HARNESS_GRADCHECK_H_
#define CCSTOI_HARNESS_GRADCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "loss/losses.h"
#include "metrics/intelligibility.h"
#include "nn/mask_net.h"

namespace ccstoi {

struct GradCheckOptions {
  std::vector<LossKind> losses = {LossKind::kMse, LossKind::kStoi,
                                   LossKind::kCcStoi};
  MseForm mse_form = MseForm::kFrameNorm;
  MetricConfig metric;
  uint64_t seed = 0;
  int grids = 5;
  // Frames per test grid; the frequency axis follows metric.stft.
  int frames = 40;
  double loss_tolerance = 1e-4;
  // End-to-end check of the mask network through the CC-STOI loss.
  bool network = true;
  int network_parameters = 20;
  double network_tolerance = 1e-3;
  nn::MaskNetConfig net;
  // Entries whose normalized estimate lies within this relative distance of
  // its clip bound are skipped: the loss has a kink there.
  double clip_exclusion = 1e-2;
  // Test hook: perturbs the largest analytic gradient entry by 1%.
  bool corrupt_gradient = false;
};

struct GradCheckLine {
  std::string name;
  double max_rel_error = 0.0;
  size_t checked = 0;
  size_t excluded = 0;
  double tolerance = 0.0;
  bool pass = false;
};

struct GradCheckReport {
  std::vector<GradCheckLine> lines;
  bool pass() const;
  std::string Format() const;
};

// |a - n| / max(|a|, |n|, floor), the floor guarding entries whose exact
// value is (numerically) zero.
double RelativeError(double analytic, double numeric, double floor);

GradCheckReport RunGradCheck(const GradCheckOptions& options);

}  // namespace ccstoi

#endif  // CCSTOI_HARNESS_GRADCHECK_H_
