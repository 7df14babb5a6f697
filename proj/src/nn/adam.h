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

#ifndef CCSTOI_NN_ADAM_H_
#define CCSTOI_NN_ADAM_H_

#include <cstdint>
#include <vector>

namespace ccstoi::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  uint64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;
};

// Adam with bias correction. Parameters and moments are rounded to float32
// after every step.
class Adam {
 public:
  Adam(size_t num_parameters, const AdamConfig& cfg);
  Adam(const AdamConfig& cfg, AdamState state);

  void Step(std::vector<double>* params, const std::vector<double>& grad);

  const AdamState& state() const { return state_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  AdamState state_;
};

}  // namespace ccstoi::nn

#endif  // CCSTOI_NN_ADAM_H_
