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

#ifndef CCSTOI_TESTS_TEST_UTIL_H_
#define CCSTOI_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "common/rng.h"
#include "signal/synthetic.h"
#include "signal/wav.h"

namespace ccstoi::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    std::string pattern =
        (std::filesystem::temp_directory_path() / ("ccstoi-" + tag + "-XXXXXX"))
            .string();
    path_ = mkdtemp(pattern.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string operator/(const std::string& rel) const { return path_ + "/" + rel; }

 private:
  std::string path_;
};

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CorpusSpec {
  std::vector<std::string> speakers = {"spk1", "spk2"};
  int utterances = 3;
  double duration_s = 1.0;
  // White-noise files written to <root>/noise/<kind>.wav.
  std::vector<std::string> noises = {"white", "hiss"};
  double noise_duration_s = 1.5;
  uint64_t seed = 1;
};

// Writes <root>/clean/<speaker>/u<k>.wav and <root>/noise/<kind>.wav.
inline void WriteSourceCorpus(const std::string& root, const CorpusSpec& spec) {
  uint64_t index = 0;
  for (const std::string& spk : spec.speakers) {
    std::filesystem::create_directories(root + "/clean/" + spk);
    for (int u = 0; u < spec.utterances; ++u) {
      WriteWav(SyntheticSpeech(spec.duration_s, MixSeed(spec.seed, index++)),
               root + "/clean/" + spk + "/u" + std::to_string(u) + ".wav");
    }
  }
  std::filesystem::create_directories(root + "/noise");
  for (size_t k = 0; k < spec.noises.size(); ++k) {
    WriteWav(WhiteNoise(spec.noise_duration_s, MixSeed(spec.seed, 1000 + k), 16000,
                        0.05 + 0.05 * static_cast<double>(k)),
             root + "/noise/" + spec.noises[k] + ".wav");
  }
}

}  // namespace ccstoi::testing

#endif  // CCSTOI_TESTS_TEST_UTIL_H_
