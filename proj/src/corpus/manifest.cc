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

#include "corpus/manifest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "common/config.h"
#include "common/error.h"
#include "common/parallel.h"
#include "common/rng.h"
#include "corpus/mix.h"
#include "signal/wav.h"

namespace ccstoi {
namespace fs = std::filesystem;
namespace {

constexpr char kHeaderPrefix[] = "# ccstoi-manifest v";

std::vector<std::string> SortedWavs(const fs::path& dir) {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") {
      out.push_back(e.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void CheckField(const std::string& value, const char* name) {
  Require(value.find_first_of("\t\n\r") == std::string::npos,
          ErrorCode::kInvalidArgument,
          std::string("manifest field ") + name + " contains a tab or newline");
}

std::string SnrLabel(double snr) {
  std::string s = FormatDouble(snr);
  return s;
}

}  // namespace

const char* SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Split ParseSplit(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  Fail(ErrorCode::kFormat, "unknown split '" + name + "'");
}

std::string Manifest::Resolve(const std::string& path) const {
  const fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / p).string();
}

std::string SerializeManifest(const Manifest& manifest) {
  std::ostringstream out;
  out << kHeaderPrefix << manifest.format_version << "\n";
  for (const ManifestEntry& e : manifest.entries) {
    const std::pair<const char*, std::string> fields[] = {
        {"id", e.utterance_id},
        {"speaker", e.speaker_id},
        {"split", SplitName(e.split)},
        {"noise", e.noise_kind},
        {"snr_db", FormatDouble(e.snr_db)},
        {"clean", e.clean_path},
        {"noisy", e.noisy_path},
        {"source", e.source_path},
        {"noise_source", e.noise_path},
        {"seed", std::to_string(e.mix_seed)},
        {"gain", FormatDouble(e.gain)},
        {"scale", FormatDouble(e.scale)},
    };
    bool first = true;
    for (const auto& [key, value] : fields) {
      CheckField(value, key);
      if (!first) out << '\t';
      out << key << '=' << value;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

Manifest ParseManifest(const std::string& text, const std::string& base_dir) {
  Manifest manifest;
  manifest.base_dir = base_dir;
  std::istringstream in(text);
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)) &&
              line.rfind(kHeaderPrefix, 0) == 0,
          ErrorCode::kFormat, "manifest is missing its version header");
  manifest.format_version =
      std::atoi(line.substr(sizeof(kHeaderPrefix) - 1).c_str());
  Require(manifest.format_version == kManifestVersion, ErrorCode::kFormat,
          "unsupported manifest version " + std::to_string(manifest.format_version));
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    std::map<std::string, std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, '\t')) {
      const auto eq = field.find('=');
      Require(eq != std::string::npos, ErrorCode::kFormat,
              "manifest line " + std::to_string(number) + ": field without '='");
      fields[field.substr(0, eq)] = field.substr(eq + 1);
    }
    auto get = [&](const char* key) -> const std::string& {
      const auto it = fields.find(key);
      Require(it != fields.end(), ErrorCode::kFormat,
              "manifest line " + std::to_string(number) + ": missing " + key);
      return it->second;
    };
    KeyValueConfig numbers;
    numbers.Set("snr_db", get("snr_db"));
    numbers.Set("seed", get("seed"));
    numbers.Set("gain", get("gain"));
    numbers.Set("scale", get("scale"));
    ManifestEntry e;
    e.utterance_id = get("id");
    e.speaker_id = get("speaker");
    e.split = ParseSplit(get("split"));
    e.noise_kind = get("noise");
    e.snr_db = numbers.GetDouble("snr_db", 0.0);
    e.clean_path = get("clean");
    e.noisy_path = get("noisy");
    e.source_path = get("source");
    e.noise_path = get("noise_source");
    e.mix_seed = std::stoull(get("seed"));
    e.gain = numbers.GetDouble("gain", 0.0);
    e.scale = numbers.GetDouble("scale", 1.0);
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

void SaveManifest(const Manifest& manifest, const std::string& path) {
  const std::string text = SerializeManifest(manifest);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  out << text;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path);
}

Manifest LoadManifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open manifest " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseManifest(text.str(), fs::path(path).parent_path().string());
}

Manifest BuildManifest(const CorpusLayout& layout,
                       const std::vector<double>& snr_grid,
                       const SplitSpec& split, uint64_t seed) {
  Require(!snr_grid.empty(), ErrorCode::kInvalidArgument, "SNR grid is empty");
  const fs::path clean_dir(layout.clean_dir);
  const fs::path noise_dir(layout.noise_dir);
  Require(fs::is_directory(clean_dir), ErrorCode::kIo,
          "clean directory " + layout.clean_dir + " not found");
  Require(fs::is_directory(noise_dir), ErrorCode::kIo,
          "noise directory " + layout.noise_dir + " not found");

  std::vector<std::string> speakers;
  for (const auto& e : fs::directory_iterator(clean_dir)) {
    if (e.is_directory()) speakers.push_back(e.path().filename().string());
  }
  std::sort(speakers.begin(), speakers.end());
  Require(!speakers.empty(), ErrorCode::kInvalidArgument,
          "no <speaker>/ directories under " + layout.clean_dir);

  const std::vector<std::string> noises = SortedWavs(noise_dir);
  Require(!noises.empty(), ErrorCode::kInvalidArgument,
          "no noise .wav files under " + layout.noise_dir);

  std::map<std::string, Split> assignment;
  const bool explicit_lists =
      !split.train.empty() || !split.val.empty() || !split.test.empty();
  if (explicit_lists) {
    const std::set<std::string> known(speakers.begin(), speakers.end());
    auto assign = [&](const std::vector<std::string>& list, Split s) {
      for (const std::string& spk : list) {
        Require(known.count(spk) > 0, ErrorCode::kSplit,
                "speaker '" + spk + "' not found under " + layout.clean_dir);
        const auto [it, inserted] = assignment.emplace(spk, s);
        Require(inserted, ErrorCode::kSplit,
                "speaker '" + spk + "' appears in both " +
                    SplitName(it->second) + " and " + SplitName(s));
      }
    };
    assign(split.train, Split::kTrain);
    assign(split.val, Split::kVal);
    assign(split.test, Split::kTest);
  } else {
    const int wanted = split.train_count + split.val_count + split.test_count;
    Require(split.train_count >= 0 && split.val_count >= 0 &&
                split.test_count >= 0 && wanted > 0,
            ErrorCode::kSplit, "split needs speaker lists or positive counts");
    Require(wanted <= static_cast<int>(speakers.size()), ErrorCode::kSplit,
            "split asks for " + std::to_string(wanted) + " speakers but only " +
                std::to_string(speakers.size()) + " exist");
    std::vector<std::string> shuffled = speakers;
    Rng rng(MixSeed(seed, 0x5b1));
    for (size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[rng.Below(i)]);
    }
    int k = 0;
    for (int i = 0; i < split.train_count; ++i) assignment[shuffled[k++]] = Split::kTrain;
    for (int i = 0; i < split.val_count; ++i) assignment[shuffled[k++]] = Split::kVal;
    for (int i = 0; i < split.test_count; ++i) assignment[shuffled[k++]] = Split::kTest;
  }

  Manifest manifest;
  manifest.base_dir = layout.out_dir;
  uint64_t index = 0;
  for (const std::string& spk : speakers) {
    const auto it = assignment.find(spk);
    if (it == assignment.end()) continue;
    const Split s = it->second;
    for (const std::string& utt : SortedWavs(clean_dir / spk)) {
      const std::string stem = fs::path(utt).stem().string();
      for (const std::string& noise : noises) {
        const std::string kind = fs::path(noise).stem().string();
        for (double snr : snr_grid) {
          ManifestEntry e;
          e.utterance_id = spk + "_" + stem + "_" + kind + "_" + SnrLabel(snr);
          e.speaker_id = spk;
          e.split = s;
          e.noise_kind = kind;
          e.snr_db = snr;
          const std::string dir = SplitName(s);
          e.clean_path = dir + "/" + e.utterance_id + "_clean.wav";
          e.noisy_path = dir + "/" + e.utterance_id + "_noisy.wav";
          e.source_path = fs::absolute(clean_dir / spk / utt).lexically_normal().string();
          e.noise_path = fs::absolute(noise_dir / noise).lexically_normal().string();
          e.mix_seed = MixSeed(seed, index++);
          manifest.entries.push_back(std::move(e));
        }
      }
    }
  }
  return manifest;
}

void ForgeCorpus(Manifest* manifest, int jobs) {
  for (const char* dir : {"train", "val", "test"}) {
    fs::create_directories(fs::path(manifest->base_dir) / dir);
  }
  std::map<std::string, Waveform> noise_cache;
  for (const ManifestEntry& e : manifest->entries) {
    if (!noise_cache.count(e.noise_path)) {
      noise_cache.emplace(e.noise_path, ReadWav(e.noise_path));
    }
  }

  ParallelFor(manifest->entries.size(), jobs, [&](size_t i) {
    ManifestEntry& e = manifest->entries[i];
    const Waveform clean = ReadWav(e.source_path);
    const MixResult mix =
        MixAtSnr(clean, noise_cache.at(e.noise_path), e.snr_db, e.mix_seed);
    e.gain = mix.gain;
    e.scale = mix.scale;
    WriteWav(mix.clean, manifest->Resolve(e.clean_path));
    WriteWav(mix.mixture, manifest->Resolve(e.noisy_path));
  });
}

void ValidateManifest(const Manifest& manifest, bool check_files) {
  std::map<std::string, Split> speaker_split;
  for (const ManifestEntry& e : manifest.entries) {
    const auto [it, inserted] = speaker_split.emplace(e.speaker_id, e.split);
    Require(inserted || it->second == e.split, ErrorCode::kSplit,
            "speaker '" + e.speaker_id + "' appears in both " +
                SplitName(it->second) + " and " + SplitName(e.split));
    if (check_files) {
      for (const std::string* p : {&e.clean_path, &e.noisy_path}) {
        Require(fs::exists(manifest.Resolve(*p)), ErrorCode::kIo,
                "manifest file " + manifest.Resolve(*p) + " is missing");
      }
    }
  }
}

}  // namespace ccstoi
