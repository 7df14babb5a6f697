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

#include "nn/adam.h"

#include <cmath>

#include "common/error.h"
#include "nn/mask_net.h"

namespace ccstoi::nn {

Adam::Adam(size_t num_parameters, const AdamConfig& cfg) : config_(cfg) {
  state_.m.assign(num_parameters, 0.0);
  state_.v.assign(num_parameters, 0.0);
}

Adam::Adam(const AdamConfig& cfg, AdamState state)
    : config_(cfg), state_(std::move(state)) {
  Require(state_.m.size() == state_.v.size(), ErrorCode::kShape,
          "Adam moment vectors differ in size");
}

void Adam::Step(std::vector<double>* params, const std::vector<double>& grad) {
  Require(params->size() == grad.size() && grad.size() == state_.m.size(),
          ErrorCode::kShape, "Adam step: size mismatch");
  ++state_.step;
  const double t = static_cast<double>(state_.step);
  const double correction1 = 1.0 - std::pow(config_.beta1, t);
  const double correction2 = 1.0 - std::pow(config_.beta2, t);
  for (size_t i = 0; i < grad.size(); ++i) {
    double& m = state_.m[i];
    double& v = state_.v[i];
    m = config_.beta1 * m + (1.0 - config_.beta1) * grad[i];
    v = config_.beta2 * v + (1.0 - config_.beta2) * grad[i] * grad[i];
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    (*params)[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps);
  }
  RoundToFloat(params);
  RoundToFloat(&state_.m);
  RoundToFloat(&state_.v);
}

}  // namespace ccstoi::nn
