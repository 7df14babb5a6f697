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

#ifndef CCSTOI_NN_CHECKPOINT_H_
#define CCSTOI_NN_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "common/config.h"
#include "nn/adam.h"
#include "nn/mask_net.h"

namespace ccstoi::nn {

// Trained network plus everything needed to resume or reproduce it.
struct Checkpoint {
  MaskNetConfig net;
  // Non-network settings recorded alongside (training loss, STFT, metric).
  KeyValueConfig metadata;
  std::vector<double> parameters;
  AdamState optimizer;
  int epoch = 0;
  std::string rng_state;

  // Text of the config block: net.* keys merged with metadata.
  std::string ConfigText() const;
  // FNV-1a of ConfigText(), as 16 hex digits.
  std::string ConfigHash() const;
};

// Binary layout (little-endian):
//   "IMSK1"
//   u32 length, config text
//   u32 segment count; per segment: u32 name length, name, u32 count,
//       float32[count]
//   u64 optimizer step, u32 moment count, float32 m[count], float32 v[count]
//   u32 epoch
//   u32 length, rng state text
std::string SerializeCheckpoint(const Checkpoint& ckpt);
Checkpoint ParseCheckpoint(const std::string& bytes);

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace ccstoi::nn

#endif  // CCSTOI_NN_CHECKPOINT_H_
