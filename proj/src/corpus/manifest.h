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

#ifndef CCSTOI_CORPUS_MANIFEST_H_
#define CCSTOI_CORPUS_MANIFEST_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ccstoi {

enum class Split { kTrain, kVal, kTest };

const char* SplitName(Split split);
Split ParseSplit(const std::string& name);

struct ManifestEntry {
  std::string utterance_id;
  std::string speaker_id;
  Split split = Split::kTrain;
  std::string noise_kind;
  double snr_db = 0.0;
  // Generated files, relative to the manifest directory unless absolute.
  std::string clean_path;
  std::string noisy_path;
  // Inputs the pair was mixed from.
  std::string source_path;
  std::string noise_path;
  uint64_t mix_seed = 0;
  double gain = 0.0;
  double scale = 1.0;
};

inline constexpr int kManifestVersion = 1;

// Line-delimited records: a "# ccstoi-manifest v<version>" header, then one
// entry per line as tab-separated key=value fields.
struct Manifest {
  int format_version = kManifestVersion;
  // Directory that relative entry paths are resolved against. Not serialized.
  std::string base_dir;
  std::vector<ManifestEntry> entries;

  std::string Resolve(const std::string& path) const;
};

std::string SerializeManifest(const Manifest& manifest);
Manifest ParseManifest(const std::string& text, const std::string& base_dir = "");
void SaveManifest(const Manifest& manifest, const std::string& path);
// base_dir is set to the directory containing `path`.
Manifest LoadManifest(const std::string& path);

// Either explicit speaker lists, or counts drawn from a seeded shuffle of the
// discovered speakers when all lists are empty.
struct SplitSpec {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
  int train_count = 0;
  int val_count = 0;
  int test_count = 0;
};

struct CorpusLayout {
  std::string clean_dir;  // <speaker>/<utterance>.wav
  std::string noise_dir;  // <noise-kind>.wav
  std::string out_dir;    // generated files; manifest paths are relative to it
};

// Plans the Cartesian product utterances x noise kinds x SNRs for every
// speaker assigned to a split. Throws kSplit if speaker lists overlap or name
// an unknown speaker. Gains are filled in by ForgeCorpus.
Manifest BuildManifest(const CorpusLayout& layout,
                       const std::vector<double>& snr_grid,
                       const SplitSpec& split, uint64_t seed);

// Mixes and writes every entry's clean/noisy pair, filling gain and scale.
// Entries are independent; `jobs` > 1 fans out across threads.
void ForgeCorpus(Manifest* manifest, int jobs = 1);

// Throws kSplit on overlapping speaker sets and kIo if a referenced file is
// missing.
void ValidateManifest(const Manifest& manifest, bool check_files = true);

}  // namespace ccstoi

#endif  // CCSTOI_CORPUS_MANIFEST_H_
