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

#include "harness/evaluate.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "common/config.h"
#include "common/error.h"
#include "common/parallel.h"
#include "harness/dataset.h"
#include "harness/enhance.h"
#include "signal/wav.h"

namespace ccstoi {
namespace fs = std::filesystem;
namespace {

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

double RowAvg(const std::optional<double>& pesq, double stoi, double sdi) {
  double sum = stoi + sdi;
  int n = 2;
  if (pesq) {
    sum += *pesq;
    ++n;
  }
  return sum / n;
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string Fixed(const std::optional<double>& v) {
  return v ? Fixed(*v) : std::string("n/a");
}

std::string Pad(const std::string& s, size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string TempWavPath(const std::string& id) {
  std::ostringstream name;
  name << "ccstoi-" << std::hash<std::thread::id>{}(std::this_thread::get_id())
       << "-" << id << ".wav";
  return (fs::temp_directory_path() / name.str()).string();
}

}  // namespace

const char* ConditionName(Condition c) {
  switch (c) {
    case Condition::kNoisy:
      return "noisy";
    case Condition::kEnhanced:
      return "enhanced";
    case Condition::kClean:
      return "clean";
  }
  return "?";
}

Condition ParseCondition(const std::string& name) {
  if (name == "noisy") return Condition::kNoisy;
  if (name == "enhanced") return Condition::kEnhanced;
  if (name == "clean") return Condition::kClean;
  Fail(ErrorCode::kInvalidArgument, "unknown condition '" + name + "'");
}

bool MetricReport::TooManyMissing() const {
  return missing.size() * 10 > considered;
}

std::optional<double> RunPesq(const std::string& cmd, const std::string& clean,
                              const std::string& degraded) {
  const std::string line_cmd =
      cmd + " " + ShellQuote(clean) + " " + ShellQuote(degraded);
  FILE* pipe = popen(line_cmd.c_str(), "r");
  if (!pipe) return std::nullopt;
  std::string output;
  char buf[512];
  while (std::fgets(buf, sizeof(buf), pipe)) output += buf;
  const int status = pclose(pipe);
  if (status != 0) return std::nullopt;
  std::istringstream lines(output);
  std::string line, last;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) last = line;
  }
  std::istringstream tokens(last);
  std::string token;
  std::optional<double> value;
  while (tokens >> token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() && *end == '\0' && std::isfinite(v)) value = v;
  }
  return value;
}

MetricReport Evaluate(const Manifest& manifest, const EvalOptions& options) {
  Require(!options.conditions.empty(), ErrorCode::kInvalidArgument,
          "no conditions requested");
  for (Condition c : options.conditions) {
    Require(c != Condition::kEnhanced || options.net != nullptr,
            ErrorCode::kInvalidArgument,
            "the enhanced condition needs a checkpoint");
  }
  MetricReport report;
  report.config_hash = options.config_hash;
  report.loss_label = options.loss_label;

  std::vector<const ManifestEntry*> entries;
  for (const ManifestEntry& e : manifest.entries) {
    if (options.split && e.split != *options.split) continue;
    ++report.considered;
    const bool present = fs::exists(manifest.Resolve(e.clean_path)) &&
                         fs::exists(manifest.Resolve(e.noisy_path));
    if (present) {
      entries.push_back(&e);
    } else {
      report.missing.push_back(e.utterance_id);
      Log(options.log, LogLevel::kWarning,
          "skipping " + e.utterance_id + ": file missing");
    }
  }

  const std::vector<Condition>& conds = options.conditions;
  std::vector<UtteranceScore> rows(entries.size() * conds.size());
  if (!options.output_dir.empty()) {
    fs::create_directories(fs::path(options.output_dir) / "enhanced");
  }

  ParallelFor(entries.size(), options.jobs, [&](size_t i) {
    const ManifestEntry& e = *entries[i];
    const WavePair pair = LoadPair(manifest, e, options.log);
    for (size_t c = 0; c < conds.size(); ++c) {
      UtteranceScore& row = rows[i * conds.size() + c];
      row.id = e.utterance_id;
      row.condition = conds[c];
      Waveform estimate;
      std::string degraded_path;
      bool temp_file = false;
      switch (conds[c]) {
        case Condition::kNoisy:
          estimate = pair.noisy;
          degraded_path = manifest.Resolve(e.noisy_path);
          break;
        case Condition::kClean:
          estimate = pair.clean;
          degraded_path = manifest.Resolve(e.clean_path);
          break;
        case Condition::kEnhanced:
          estimate = EnhanceWaveform(*options.net, pair.noisy,
                                     options.metric.stft, options.log);
          if (!options.output_dir.empty()) {
            degraded_path = (fs::path(options.output_dir) / "enhanced" /
                             (e.utterance_id + ".wav"))
                                .string();
            WriteWav(estimate, degraded_path);
          } else if (!options.pesq_cmd.empty()) {
            degraded_path = TempWavPath(e.utterance_id);
            WriteWav(estimate, degraded_path);
            temp_file = true;
          }
          break;
      }
      MetricConfig classic = options.metric;
      classic.mode = MetricMode::kClassicStoi;
      classic.stft = ClassicStoiStftConfig();
      row.stoi = ClassicStoi(pair.clean, estimate, classic);
      row.cc_stoi = CcStoi(pair.clean, estimate, options.metric);
      row.modified_stoi = ModifiedStoi(pair.clean, estimate, options.metric);
      row.sdi = Sdi(pair.clean, estimate);
      if (!options.pesq_cmd.empty()) {
        row.pesq = RunPesq(options.pesq_cmd, manifest.Resolve(e.clean_path),
                           degraded_path);
        if (!row.pesq) {
          Log(options.log, LogLevel::kWarning,
              e.utterance_id + ": external PESQ scorer gave no score");
        }
      }
      if (temp_file) fs::remove(degraded_path);
      row.avg = RowAvg(row.pesq, row.stoi, row.sdi);
    }
  });
  report.rows = std::move(rows);

  for (Condition cond : conds) {
    ConditionAggregate agg;
    agg.condition = cond;
    double pesq_sum = 0.0;
    size_t pesq_count = 0;
    for (const UtteranceScore& row : report.rows) {
      if (row.condition != cond) continue;
      ++agg.count;
      agg.stoi += row.stoi;
      agg.cc_stoi += row.cc_stoi;
      agg.modified_stoi += row.modified_stoi;
      agg.sdi += row.sdi;
      if (row.pesq) {
        pesq_sum += *row.pesq;
        ++pesq_count;
      }
    }
    if (agg.count > 0) {
      const double n = static_cast<double>(agg.count);
      agg.stoi /= n;
      agg.cc_stoi /= n;
      agg.modified_stoi /= n;
      agg.sdi /= n;
    }
    if (pesq_count > 0) agg.pesq = pesq_sum / static_cast<double>(pesq_count);
    agg.avg = RowAvg(agg.pesq, agg.stoi, agg.sdi);
    report.aggregates.push_back(agg);
  }
  return report;
}

std::string FormatReportTable(const MetricReport& report) {
  size_t id_width = 4;
  for (const UtteranceScore& row : report.rows) {
    id_width = std::max(id_width, row.id.size() + 2);
  }
  std::ostringstream out;
  out << "# ccstoi evaluation report\n";
  if (!report.config_hash.empty()) {
    out << "# checkpoint " << report.config_hash;
    if (!report.loss_label.empty()) out << " (loss " << report.loss_label << ")";
    out << "\n";
  }
  out << "# entries " << report.considered << ", missing "
      << report.missing.size() << "\n";
  for (const std::string& id : report.missing) out << "# missing " << id << "\n";
  const size_t w = 10;
  out << Pad("id", id_width) << Pad("condition", w) << Pad("PESQ", w)
      << Pad("STOI", w) << Pad("CC-STOI", w) << Pad("SDI", w) << "Avg.\n";
  for (const UtteranceScore& row : report.rows) {
    out << Pad(row.id, id_width) << Pad(ConditionName(row.condition), w)
        << Pad(Fixed(row.pesq), w) << Pad(Fixed(row.stoi), w)
        << Pad(Fixed(row.cc_stoi), w) << Pad(Fixed(row.sdi), w)
        << Fixed(row.avg) << "\n";
  }
  for (const ConditionAggregate& agg : report.aggregates) {
    out << Pad("mean", id_width) << Pad(ConditionName(agg.condition), w)
        << Pad(Fixed(agg.pesq), w) << Pad(Fixed(agg.stoi), w)
        << Pad(Fixed(agg.cc_stoi), w) << Pad(Fixed(agg.sdi), w)
        << Fixed(agg.avg) << "\n";
  }
  return out.str();
}

std::string FormatReportJsonLines(const MetricReport& report) {
  using nlohmann::ordered_json;
  auto number = [](const std::optional<double>& v) -> ordered_json {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  std::ostringstream out;
  for (const UtteranceScore& row : report.rows) {
    ordered_json j;
    j["type"] = "utterance";
    j["id"] = row.id;
    j["condition"] = ConditionName(row.condition);
    j["pesq"] = number(row.pesq);
    j["stoi"] = row.stoi;
    j["cc_stoi"] = row.cc_stoi;
    j["modified_stoi"] = row.modified_stoi;
    j["sdi"] = row.sdi;
    j["avg"] = row.avg;
    if (!report.config_hash.empty()) j["config_hash"] = report.config_hash;
    out << j.dump() << "\n";
  }
  for (const ConditionAggregate& agg : report.aggregates) {
    ordered_json j;
    j["type"] = "aggregate";
    j["condition"] = ConditionName(agg.condition);
    j["count"] = agg.count;
    j["pesq"] = number(agg.pesq);
    j["stoi"] = agg.stoi;
    j["cc_stoi"] = agg.cc_stoi;
    j["modified_stoi"] = agg.modified_stoi;
    j["sdi"] = agg.sdi;
    j["avg"] = agg.avg;
    if (!report.config_hash.empty()) j["config_hash"] = report.config_hash;
    if (!report.loss_label.empty()) j["loss"] = report.loss_label;
    out << j.dump() << "\n";
  }
  for (const std::string& id : report.missing) {
    ordered_json j;
    j["type"] = "missing";
    j["id"] = id;
    out << j.dump() << "\n";
  }
  return out.str();
}

}  // namespace ccstoi
