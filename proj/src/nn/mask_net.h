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

#ifndef CCSTOI_NN_MASK_NET_H_
#define CCSTOI_NN_MASK_NET_H_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "common/config.h"
#include "loss/losses.h"
#include "nn/tape.h"

namespace ccstoi::nn {

struct MaskNetConfig {
  int base_channels = 8;
  // Frequency rows seen by the network; spectra are cropped or zero-padded
  // to this many rows on input.
  int input_freq = 256;
  int first_stride = 4;
  int second_stride = 2;
  int blocks = 3;
  int block_filter = 3;
  int decoder_filter = 4;
  uint64_t seed = 0;

  void Validate() const;
  int freq_reduction() const { return first_stride * second_stride << blocks; }
  int time_reduction() const { return first_stride * second_stride; }

  // Keys are prefixed with "net.".
  KeyValueConfig ToConfig() const;
  static MaskNetConfig FromConfig(const KeyValueConfig& cfg);
};

struct ParameterInfo {
  std::string name;
  std::vector<int> shape;
  size_t offset = 0;
  size_t size = 0;
};

// Convolutional encoder/decoder producing a sigmoid mask over a magnitude
// spectrogram:
//
//   log1p(|X|) -> conv k4/s4 -> conv k4/s2 -> B x [conv 3x3, pool freq /2]
//   -> B x [upsample freq x2, concat skip, conv 3x3]
//   -> tconv k4/s2 -> concat skip -> tconv k4/s4 -> sigmoid
//
// Time is reflect-padded to a multiple of 8 and cropped back afterwards. Rows
// beyond input_freq (the Nyquist bin for 512-point spectra) reuse the mask of
// the last modelled row.
class MaskNet {
 public:
  explicit MaskNet(const MaskNetConfig& cfg);
  MaskNet(const MaskNetConfig& cfg, std::vector<double> parameters);

  const MaskNetConfig& config() const { return config_; }
  const std::vector<ParameterInfo>& layout() const { return layout_; }
  std::vector<double>& parameters() { return parameters_; }
  const std::vector<double>& parameters() const { return parameters_; }
  size_t num_parameters() const { return parameters_.size(); }
  const ParameterInfo& parameter(const std::string& name) const;

  struct Output {
    Eigen::MatrixXd mask;
    Eigen::MatrixXd enhanced;
  };

  Output Forward(const Eigen::MatrixXd& noisy_mag) const;

  using LossFn = std::function<LossValueGrad(const Eigen::MatrixXd& enhanced)>;

  // Forward pass, loss evaluation on the enhanced magnitude and reverse pass.
  // Parameter gradients are added into *param_grad (resized if empty).
  double Backprop(const Eigen::MatrixXd& noisy_mag, const LossFn& loss,
                  std::vector<double>* param_grad,
                  Output* output = nullptr) const;

  // Parameter layout implied by a config, without initializing values.
  static std::vector<ParameterInfo> Layout(const MaskNetConfig& cfg);

 private:
  struct Graph;
  void Build(Graph& g, const Eigen::MatrixXd& noisy_mag) const;

  MaskNetConfig config_;
  std::vector<ParameterInfo> layout_;
  std::vector<double> parameters_;
};

// Rounds every value to the nearest float32. Parameters and optimizer state
// are kept on the float32 grid so checkpoints reproduce them exactly.
void RoundToFloat(std::vector<double>* values);

}  // namespace ccstoi::nn

#endif  // CCSTOI_NN_MASK_NET_H_
