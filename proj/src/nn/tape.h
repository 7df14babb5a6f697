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

#ifndef CCSTOI_NN_TAPE_H_
#define CCSTOI_NN_TAPE_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ccstoi::nn {

class Tape;

// Handle to a node recorded on a Tape. Activations are (channels, freq, time);
// convolution weights are (out, in, kh, kw) or (in, out, kh, kw) for the
// transposed form; biases are (channels).
class Tensor {
 public:
  Tensor() = default;
  Tensor(Tape* tape, int id) : tape_(tape), id_(id) {}

  const std::vector<int>& shape() const;
  int dim(int axis) const { return shape()[axis]; }
  size_t size() const { return value().size(); }
  const std::vector<double>& value() const;
  const std::vector<double>& grad() const;
  int id() const { return id_; }
  Tape* tape() const { return tape_; }

 private:
  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Reverse-mode tape. Nodes are appended in evaluation order, so running the
// recorded backward rules from last to first visits every node after all of
// its consumers.
class Tape {
 public:
  struct Node {
    std::vector<int> shape;
    std::vector<double> value;
    std::vector<double> grad;
    std::function<void()> backward;
  };

  Tensor Leaf(std::vector<int> shape, std::vector<double> value);
  Tensor Record(std::vector<int> shape, std::vector<double> value);
  void SetBackward(const Tensor& t, std::function<void()> rule);

  // Zeroes all gradients, seeds `output` with `seed` and runs every backward
  // rule in reverse order.
  void Backward(const Tensor& output, std::span<const double> seed);

  Node& node(int id) { return *nodes_[id]; }
  const Node& node(int id) const { return *nodes_[id]; }
  size_t num_nodes() const { return nodes_.size(); }

 private:
  std::vector<std::unique_ptr<Node>> nodes_;
};

struct Stride2 {
  int freq = 1;
  int time = 1;
};

// x (Cin, H, W), w (Cout, Cin, KH, KW), bias (Cout). Zero padding.
Tensor Conv2d(const Tensor& x, const Tensor& w, const Tensor& bias,
              Stride2 stride, Stride2 padding);
// x (Cin, H, W), w (Cin, Cout, KH, KW), bias (Cout). Output extent is
// (H - 1) * stride - 2 * padding + KH.
Tensor Conv2dTranspose(const Tensor& x, const Tensor& w, const Tensor& bias,
                       Stride2 stride, Stride2 padding);
// Mean of adjacent frequency rows; requires an even frequency extent.
Tensor AvgPoolFreq(const Tensor& x, int factor);
// Nearest-neighbour repetition along frequency.
Tensor UpsampleFreq(const Tensor& x, int factor);
Tensor Relu(const Tensor& x);
// Logistic function; the result is clamped strictly inside (0, 1).
Tensor Sigmoid(const Tensor& x);
Tensor Mul(const Tensor& a, const Tensor& b);
Tensor ConcatChannels(const Tensor& a, const Tensor& b);

enum class PadMode { kZero, kEdge };
// Crops trailing frequency rows or pads new rows at the end (zeros or copies
// of the last row).
Tensor CropPadFreq(const Tensor& x, int target, PadMode mode = PadMode::kZero);
// Extends the time axis to `target` frames by mirror reflection about the
// last frame (repeated as needed for very short inputs).
Tensor ReflectPadTime(const Tensor& x, int target);
// Keeps the first `target` frames.
Tensor CropTime(const Tensor& x, int target);

}  // namespace ccstoi::nn

#endif  // CCSTOI_NN_TAPE_H_
