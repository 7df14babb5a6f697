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

#include "harness/dataset.h"

#include "common/error.h"
#include "signal/resample.h"
#include "signal/wav.h"

namespace ccstoi {
namespace {

Waveform ReadAtModelRate(const std::string& path, const LogFn& log) {
  Waveform w = ReadWav(path);
  if (w.sample_rate != kModelRate) {
    Log(log, LogLevel::kWarning,
        path + ": resampling from " + std::to_string(w.sample_rate) + " Hz to " +
            std::to_string(kModelRate) + " Hz");
    w = Resample(w, kModelRate);
  }
  return w;
}

}  // namespace

WavePair LoadPair(const Manifest& manifest, const ManifestEntry& entry,
                  const LogFn& log) {
  WavePair pair;
  pair.clean = ReadAtModelRate(manifest.Resolve(entry.clean_path), log);
  pair.noisy = ReadAtModelRate(manifest.Resolve(entry.noisy_path), log);
  Require(pair.clean.size() == pair.noisy.size(), ErrorCode::kShape,
          entry.utterance_id + ": clean and noisy lengths differ");
  return pair;
}

nn::TrainingExample MakeExample(const std::string& id, const WavePair& pair,
                                const StftConfig& stft) {
  nn::TrainingExample ex;
  ex.id = id;
  ex.noisy = Stft(pair.noisy, stft).Magnitude();
  ex.clean = Stft(pair.clean, stft).Magnitude();
  return ex;
}

std::vector<nn::TrainingExample> LoadExamples(const Manifest& manifest,
                                              Split split,
                                              const StftConfig& stft,
                                              const LogFn& log) {
  std::vector<nn::TrainingExample> out;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.split != split) continue;
    out.push_back(MakeExample(e.utterance_id, LoadPair(manifest, e, log), stft));
  }
  return out;
}

}  // namespace ccstoi
