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

// Command-line front end. Uses only the public C interface.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccstoi/ccstoi.h"

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kValidation = 2, kNumeric = 3, kIo = 4 };

int ExitFor(ccstoi_status status) {
  switch (status) {
    case CCSTOI_OK:
      return kOk;
    case CCSTOI_ERR_IO:
      return kIo;
    case CCSTOI_ERR_NUMERIC:
    case CCSTOI_ERR_CHECK_FAILED:
      return kNumeric;
    case CCSTOI_ERR_INTERNAL:
      return kInternal;
    default:
      return kValidation;
  }
}

// Prints the failure and returns the process exit code.
int Report(ccstoi_status status, const char* what) {
  if (status != CCSTOI_OK) {
    std::fprintf(stderr, "ccstoi %s: %s error: %s\n", what,
                 ccstoi_status_name(status), ccstoi_last_error());
  }
  return ExitFor(status);
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (ptr) Free(ptr);
  }
};

using WaveHandle = Handle<ccstoi_waveform, ccstoi_waveform_free>;
using ModelHandle = Handle<ccstoi_model, ccstoi_model_free>;
using SettingsHandle = Handle<ccstoi_settings, ccstoi_settings_free>;

void LogToStderr(int level, const char* message, void* user) {
  const bool quiet = *static_cast<bool*>(user);
  if (quiet && level == 0) return;
  std::fprintf(stderr, "%s%s\n", level ? "warning: " : "", message);
}

struct Globals {
  uint64_t seed = 0;
  bool seed_given = false;
  std::string config;
  int jobs = 1;
  std::vector<std::string> overrides;
  bool quiet = false;
};

// Defaults, then --config, then --set, then --seed.
ccstoi_status LoadSettings(const Globals& g, SettingsHandle* out) {
  ccstoi_status st = g.config.empty() ? ccstoi_settings_create(&out->ptr)
                                      : ccstoi_settings_load(g.config.c_str(), &out->ptr);
  if (st != CCSTOI_OK) return st;
  for (const std::string& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "--set expects key=value, got '%s'\n", kv.c_str());
      return CCSTOI_ERR_CONFIG;
    }
    st = ccstoi_settings_set(out->ptr, kv.substr(0, eq).c_str(),
                             kv.substr(eq + 1).c_str());
    if (st != CCSTOI_OK) return st;
  }
  if (g.seed_given) {
    st = ccstoi_settings_set(out->ptr, "seed", std::to_string(g.seed).c_str());
  }
  return st;
}

const char* OrNull(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

void PrintEpoch(const ccstoi_epoch_info* e, void*) {
  if (std::isnan(e->val_loss)) {
    std::printf("epoch %4d  train_loss %.6f  train_cc_stoi %.4f%s\n", e->epoch,
                e->train_loss, e->train_cc_stoi, e->best ? "  *" : "");
  } else {
    std::printf("epoch %4d  train_loss %.6f  train_cc_stoi %.4f  val_loss %.6f"
                "  val_cc_stoi %.4f%s\n",
                e->epoch, e->train_loss, e->train_cc_stoi, e->val_loss,
                e->val_cc_stoi, e->best ? "  *" : "");
  }
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CC-STOI toolkit: intelligibility metrics, mask training and evaluation"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice")
      ->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("--config", g.config, "key=value settings file")
      ->check(CLI::ExistingFile);
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--set", g.overrides, "Override one setting (key=value)");
  app.add_flag("--quiet", g.quiet, "Only print warnings and errors");

  // mix
  auto* mix = app.add_subcommand("mix", "Mix a noise file into a clean file at a given SNR");
  std::string mix_clean, mix_noise, mix_out, mix_clean_out;
  double mix_snr = 0.0;
  mix->add_option("--clean", mix_clean)->required()->check(CLI::ExistingFile);
  mix->add_option("--noise", mix_noise)->required()->check(CLI::ExistingFile);
  mix->add_option("--snr", mix_snr, "Target SNR in dB")->required();
  mix->add_option("--out", mix_out)->required();
  mix->add_option("--clean-out", mix_clean_out, "Also write the scaled clean component");

  // manifest
  auto* man = app.add_subcommand("manifest", "Build a mixed corpus and its manifest");
  std::string man_clean, man_noise, man_out, man_path, man_check;
  man->add_option("--clean-dir", man_clean, "<speaker>/<utterance>.wav tree");
  man->add_option("--noise-dir", man_noise, "<kind>.wav files");
  man->add_option("--out-dir", man_out, "Where mixed files are written");
  man->add_option("--manifest", man_path, "Manifest path (default <out-dir>/manifest.txt)");
  man->add_option("--check", man_check, "Only validate an existing manifest");

  // train
  auto* train = app.add_subcommand("train", "Train the mask network on a manifest");
  std::string tr_manifest, tr_out, tr_last;
  train->add_option("--manifest", tr_manifest)->required()->check(CLI::ExistingFile);
  train->add_option("--out", tr_out, "Best checkpoint")->required();
  train->add_option("--last", tr_last, "Final checkpoint");

  // enhance
  auto* enh = app.add_subcommand("enhance", "Enhance a noisy recording");
  std::string en_ckpt, en_in, en_out;
  enh->add_option("--checkpoint", en_ckpt)->required()->check(CLI::ExistingFile);
  enh->add_option("--in", en_in)->required()->check(CLI::ExistingFile);
  enh->add_option("--out", en_out)->required();

  // eval
  auto* ev = app.add_subcommand("eval", "Score a manifest (STOI, CC-STOI, SDI, optional PESQ)");
  std::string ev_manifest, ev_ckpt, ev_conditions, ev_split, ev_table, ev_jsonl, ev_outdir;
  ev->add_option("--manifest", ev_manifest)->required()->check(CLI::ExistingFile);
  ev->add_option("--checkpoint", ev_ckpt)->check(CLI::ExistingFile);
  ev->add_option("--conditions", ev_conditions, "Comma list of noisy,enhanced,clean");
  ev->add_option("--split", ev_split, "train, val or test");
  ev->add_option("--table", ev_table, "Aligned-text report (default: stdout)");
  ev->add_option("--jsonl", ev_jsonl, "Line-delimited JSON report");
  ev->add_option("--out-dir", ev_outdir, "Keep enhanced audio here");

  // scatter
  auto* sc = app.add_subcommand("scatter", "Export CC-STOI vs modified STOI plot data");
  std::string sc_manifest, sc_ckpt, sc_conditions = "noisy", sc_split, sc_out;
  sc->add_option("--manifest", sc_manifest)->required()->check(CLI::ExistingFile);
  sc->add_option("--checkpoint", sc_ckpt)->check(CLI::ExistingFile);
  sc->add_option("--conditions", sc_conditions, "Comma list of noisy,enhanced,clean");
  sc->add_option("--split", sc_split, "train, val or test");
  sc->add_option("--out", sc_out)->required();

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck", "Finite-difference check of loss and network gradients");
  std::string gc_loss;
  int gc_size = 0;
  bool gc_no_network = false, gc_corrupt = false;
  gc->add_option("--loss", gc_loss, "mse, stoi or cc-stoi (default: all)");
  gc->add_option("--size", gc_size, "Frames per test grid");
  gc->add_flag("--no-network", gc_no_network, "Skip the end-to-end network check");
  gc->add_flag("--corrupt-gradient", gc_corrupt, "Test hook: perturb the analytic gradient");

  // synth
  auto* syn = app.add_subcommand("synth", "Write a synthetic speech-like or white-noise signal");
  std::string syn_out, syn_kind = "speech";
  double syn_duration = 3.0, syn_stddev = 0.1;
  syn->add_option("--out", syn_out)->required();
  syn->add_option("--kind", syn_kind, "speech or noise")
      ->check(CLI::IsMember({"speech", "noise"}));
  syn->add_option("--duration", syn_duration, "Seconds")->check(CLI::PositiveNumber);
  syn->add_option("--stddev", syn_stddev, "Noise standard deviation");

  // config
  auto* cfg = app.add_subcommand("config", "Print the effective settings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  ccstoi_set_log_callback(LogToStderr, &g.quiet);
  SettingsHandle settings;
  if (int rc = Report(LoadSettings(g, &settings), "settings")) return rc;

  if (*cfg) {
    char* text = nullptr;
    const ccstoi_status st = ccstoi_settings_serialize(settings.ptr, &text);
    if (st == CCSTOI_OK) std::fputs(text, stdout);
    ccstoi_string_free(text);
    return Report(st, "config");
  }

  if (*syn) {
    WaveHandle wave;
    ccstoi_status st =
        syn_kind == "speech"
            ? ccstoi_synthetic_speech(syn_duration, g.seed, 16000, &wave.ptr)
            : ccstoi_white_noise(syn_duration, g.seed, 16000, syn_stddev, &wave.ptr);
    if (st == CCSTOI_OK) st = ccstoi_waveform_write(wave.ptr, syn_out.c_str());
    return Report(st, "synth");
  }

  if (*mix) {
    WaveHandle clean, noise, mixture, scaled;
    ccstoi_status st = ccstoi_waveform_read(mix_clean.c_str(), &clean.ptr);
    if (st == CCSTOI_OK) st = ccstoi_waveform_read(mix_noise.c_str(), &noise.ptr);
    double gain = 0.0, scale = 1.0;
    if (st == CCSTOI_OK) {
      st = ccstoi_mix_at_snr(clean.ptr, noise.ptr, mix_snr, g.seed, &mixture.ptr,
                             &scaled.ptr, &gain, &scale);
    }
    if (st == CCSTOI_OK) st = ccstoi_waveform_write(mixture.ptr, mix_out.c_str());
    if (st == CCSTOI_OK && !mix_clean_out.empty()) {
      st = ccstoi_waveform_write(scaled.ptr, mix_clean_out.c_str());
    }
    if (st == CCSTOI_OK && !g.quiet) {
      std::printf("gain %.6g scale %.6g\n", gain, scale);
    }
    return Report(st, "mix");
  }

  if (*man) {
    if (!man_check.empty()) {
      const ccstoi_status st = ccstoi_validate_manifest(man_check.c_str());
      if (st == CCSTOI_OK) std::printf("manifest ok\n");
      return Report(st, "manifest");
    }
    if (man_clean.empty() || man_noise.empty() || man_out.empty()) {
      std::fprintf(stderr, "manifest: --clean-dir, --noise-dir and --out-dir are required\n");
      return kValidation;
    }
    if (man_path.empty()) man_path = man_out + "/manifest.txt";
    const ccstoi_status st =
        ccstoi_build_corpus(settings.ptr, man_clean.c_str(), man_noise.c_str(),
                            man_out.c_str(), man_path.c_str(), g.jobs, nullptr);
    return Report(st, "manifest");
  }

  if (*train) {
    return Report(ccstoi_train(settings.ptr, tr_manifest.c_str(), tr_out.c_str(),
                               OrNull(tr_last), g.quiet ? nullptr : PrintEpoch,
                               nullptr),
                  "train");
  }

  ModelHandle model;
  const std::string& ckpt = *enh ? en_ckpt : (*ev ? ev_ckpt : sc_ckpt);
  if ((*enh || *ev || *sc) && !ckpt.empty()) {
    if (int rc = Report(ccstoi_model_load(ckpt.c_str(), &model.ptr), "checkpoint")) {
      return rc;
    }
  }

  if (*enh) {
    WaveHandle in, out;
    ccstoi_status st = ccstoi_waveform_read(en_in.c_str(), &in.ptr);
    if (st == CCSTOI_OK) st = ccstoi_model_enhance(model.ptr, in.ptr, &out.ptr);
    if (st == CCSTOI_OK) st = ccstoi_waveform_write(out.ptr, en_out.c_str());
    return Report(st, "enhance");
  }

  if (*ev) {
    ccstoi_eval_summary summary{};
    char* table = nullptr;
    const ccstoi_status st = ccstoi_evaluate(
        settings.ptr, ev_manifest.c_str(), model.ptr, OrNull(ev_conditions),
        OrNull(ev_split), g.jobs, OrNull(ev_table), OrNull(ev_jsonl),
        OrNull(ev_outdir), ev_table.empty() ? &table : nullptr, &summary);
    if (table) std::fputs(table, stdout);
    ccstoi_string_free(table);
    if (summary.missing > 0) {
      std::fprintf(stderr, "%zu of %zu entries skipped (missing files)\n",
                   summary.missing, summary.considered);
    }
    return Report(st, "eval");
  }

  if (*sc) {
    double r = 0.0;
    size_t points = 0;
    const ccstoi_status st =
        ccstoi_scatter(settings.ptr, sc_manifest.c_str(), model.ptr,
                       sc_conditions.c_str(), OrNull(sc_split), g.jobs,
                       sc_out.c_str(), &r, &points);
    if (st == CCSTOI_OK && !g.quiet) {
      if (std::isnan(r)) {
        std::printf("%zu points, pearson r undefined\n", points);
      } else {
        std::printf("%zu points, pearson r %.6f\n", points, r);
      }
    }
    return Report(st, "scatter");
  }

  if (*gc) {
    char* text = nullptr;
    const ccstoi_status st =
        ccstoi_gradcheck(settings.ptr, OrNull(gc_loss), g.seed, gc_size,
                         gc_no_network ? 0 : 1, gc_corrupt ? 1 : 0, &text);
    if (text) std::fputs(text, stdout);
    ccstoi_string_free(text);
    return Report(st, "gradcheck");
  }
  return kValidation;
}
