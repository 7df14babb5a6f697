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

/* C interface to the CC-STOI toolkit.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free function. Every fallible call returns a ccstoi_status; on
 * failure ccstoi_last_error() describes the problem (per thread). Strings
 * returned through char** must be released with ccstoi_string_free. */
#ifndef CCSTOI_CCSTOI_H_
#define CCSTOI_CCSTOI_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define CCSTOI_API __attribute__((visibility("default")))
#else
#define CCSTOI_API
#endif

typedef enum ccstoi_status {
  CCSTOI_OK = 0,
  CCSTOI_ERR_INVALID_ARGUMENT = 1,
  CCSTOI_ERR_FORMAT = 2,
  CCSTOI_ERR_UNSUPPORTED_FORMAT = 3,
  CCSTOI_ERR_SHAPE = 4,
  CCSTOI_ERR_TOO_SHORT = 5,
  CCSTOI_ERR_EMPTY_SIGNAL = 6,
  CCSTOI_ERR_CONFIG = 7,
  CCSTOI_ERR_SPLIT = 8,
  CCSTOI_ERR_DEGENERATE_NOISE = 9,
  CCSTOI_ERR_NUMERIC = 10,
  CCSTOI_ERR_IO = 11,
  CCSTOI_ERR_UNDEFINED_METRIC = 12,
  CCSTOI_ERR_CHECK_FAILED = 13,
  CCSTOI_ERR_INTERNAL = 100
} ccstoi_status;

typedef struct ccstoi_waveform ccstoi_waveform;
typedef struct ccstoi_settings ccstoi_settings;
typedef struct ccstoi_model ccstoi_model;

/* level: 0 info, 1 warning. */
typedef void (*ccstoi_log_fn)(int level, const char* message, void* user);

CCSTOI_API const char* ccstoi_version(void);
CCSTOI_API const char* ccstoi_status_name(ccstoi_status status);
/* Message of the last failed call on this thread; "" if none. */
CCSTOI_API const char* ccstoi_last_error(void);
/* Process-wide sink for progress and warnings; NULL disables logging. */
CCSTOI_API void ccstoi_set_log_callback(ccstoi_log_fn fn, void* user);
CCSTOI_API void ccstoi_string_free(char* s);

/* ---- waveforms ---- */

CCSTOI_API ccstoi_status ccstoi_waveform_create(const double* samples,
                                                size_t length, int sample_rate,
                                                ccstoi_waveform** out);
CCSTOI_API ccstoi_status ccstoi_waveform_read(const char* path,
                                              ccstoi_waveform** out);
CCSTOI_API ccstoi_status ccstoi_waveform_write(const ccstoi_waveform* wave,
                                               const char* path);
CCSTOI_API void ccstoi_waveform_free(ccstoi_waveform* wave);
CCSTOI_API size_t ccstoi_waveform_length(const ccstoi_waveform* wave);
CCSTOI_API int ccstoi_waveform_rate(const ccstoi_waveform* wave);
/* Borrowed pointer, valid until the handle is freed. */
CCSTOI_API const double* ccstoi_waveform_samples(const ccstoi_waveform* wave);
CCSTOI_API ccstoi_status ccstoi_waveform_resample(const ccstoi_waveform* wave,
                                                  int target_rate,
                                                  ccstoi_waveform** out);
CCSTOI_API ccstoi_status ccstoi_synthetic_speech(double duration_s,
                                                 uint64_t seed, int sample_rate,
                                                 ccstoi_waveform** out);
CCSTOI_API ccstoi_status ccstoi_white_noise(double duration_s, uint64_t seed,
                                            int sample_rate, double stddev,
                                            ccstoi_waveform** out);

/* Mixes noise into clean at snr_db. clean_out (optional) receives the clean
 * component after any joint peak scaling; gain and scale may be NULL. */
CCSTOI_API ccstoi_status ccstoi_mix_at_snr(const ccstoi_waveform* clean,
                                           const ccstoi_waveform* noise,
                                           double snr_db, uint64_t seed,
                                           ccstoi_waveform** mixture_out,
                                           ccstoi_waveform** clean_out,
                                           double* gain, double* scale);

/* ---- settings (key=value configuration) ---- */

CCSTOI_API ccstoi_status ccstoi_settings_create(ccstoi_settings** out);
CCSTOI_API ccstoi_status ccstoi_settings_load(const char* path,
                                              ccstoi_settings** out);
CCSTOI_API void ccstoi_settings_free(ccstoi_settings* settings);
/* Rejects unknown keys and values that fail validation; the settings are
 * left unchanged on failure. */
CCSTOI_API ccstoi_status ccstoi_settings_set(ccstoi_settings* settings,
                                             const char* key, const char* value);
CCSTOI_API ccstoi_status ccstoi_settings_get(const ccstoi_settings* settings,
                                             const char* key, char** value);
/* Every key with its current value, one key=value per line. */
CCSTOI_API ccstoi_status ccstoi_settings_serialize(
    const ccstoi_settings* settings, char** text);

/* ---- metrics ---- */

/* metric: "cc-stoi", "modified-stoi", "classic-stoi" or "sdi". settings may
 * be NULL for defaults. */
CCSTOI_API ccstoi_status ccstoi_metric(const ccstoi_settings* settings,
                                       const char* metric,
                                       const ccstoi_waveform* clean,
                                       const ccstoi_waveform* estimate,
                                       double* out);

/* ---- corpus ---- */

/* Plans the corpus from clean_dir (<speaker>/<utterance>.wav) and noise_dir
 * (<kind>.wav) using the corpus.* settings, mixes every pair into out_dir and
 * writes the manifest to manifest_path. entries may be NULL. */
CCSTOI_API ccstoi_status ccstoi_build_corpus(const ccstoi_settings* settings,
                                             const char* clean_dir,
                                             const char* noise_dir,
                                             const char* out_dir,
                                             const char* manifest_path,
                                             int jobs, size_t* entries);
/* Checks split disjointness and that every referenced file exists. */
CCSTOI_API ccstoi_status ccstoi_validate_manifest(const char* manifest_path);

/* ---- training and models ---- */

typedef struct ccstoi_epoch_info {
  int epoch;
  double train_loss;
  double train_cc_stoi;
  double val_loss;     /* NaN without validation entries */
  double val_cc_stoi;  /* NaN without validation entries */
  int best;
} ccstoi_epoch_info;

typedef void (*ccstoi_epoch_fn)(const ccstoi_epoch_info* info, void* user);

/* Trains on the manifest's train split (validating on its val split) under
 * the train.* settings. The best checkpoint goes to checkpoint_path and the
 * final one to last_path when that is non-NULL. */
CCSTOI_API ccstoi_status ccstoi_train(const ccstoi_settings* settings,
                                      const char* manifest_path,
                                      const char* checkpoint_path,
                                      const char* last_path,
                                      ccstoi_epoch_fn on_epoch, void* user);

/* Freshly initialized network from the net.* settings. */
CCSTOI_API ccstoi_status ccstoi_model_create(const ccstoi_settings* settings,
                                             ccstoi_model** out);
CCSTOI_API ccstoi_status ccstoi_model_load(const char* path,
                                           ccstoi_model** out);
CCSTOI_API ccstoi_status ccstoi_model_save(const ccstoi_model* model,
                                           const char* path);
CCSTOI_API void ccstoi_model_free(ccstoi_model* model);
/* 16 hex digits identifying the checkpoint configuration. Borrowed. */
CCSTOI_API const char* ccstoi_model_config_hash(const ccstoi_model* model);
CCSTOI_API size_t ccstoi_model_num_parameters(const ccstoi_model* model);
/* Sets every element of a named parameter tensor (e.g. "head.bias"). */
CCSTOI_API ccstoi_status ccstoi_model_fill_parameter(ccstoi_model* model,
                                                     const char* name,
                                                     double value);
/* Masks the noisy signal and resynthesizes it with the noisy phase. Input at
 * another rate is resampled to 16 kHz with a logged warning. */
CCSTOI_API ccstoi_status ccstoi_model_enhance(const ccstoi_model* model,
                                              const ccstoi_waveform* noisy,
                                              ccstoi_waveform** out);

/* ---- evaluation ---- */

typedef struct ccstoi_eval_summary {
  size_t considered;
  size_t scored;
  size_t missing;
  int too_many_missing;
} ccstoi_eval_summary;

/* conditions: comma-separated subset of "noisy,enhanced,clean" (NULL means
 * noisy, plus enhanced when a model is given). split: "train", "val", "test"
 * or NULL for all entries. Reports are written when their paths are
 * non-NULL; enhanced audio goes to output_dir/enhanced when output_dir is
 * non-NULL. table_text (optional) receives the aligned-text report. Returns CCSTOI_ERR_IO after writing the reports if more than 10%
 * of the entries had missing files. */
CCSTOI_API ccstoi_status ccstoi_evaluate(
    const ccstoi_settings* settings, const char* manifest_path,
    const ccstoi_model* model, const char* conditions, const char* split,
    int jobs, const char* table_path, const char* jsonl_path,
    const char* output_dir, char** table_text, ccstoi_eval_summary* summary);

/* Writes the (cc_stoi, modified_stoi) plot data for the requested
 * conditions. pearson_r is NaN when undefined. */
CCSTOI_API ccstoi_status ccstoi_scatter(const ccstoi_settings* settings,
                                        const char* manifest_path,
                                        const ccstoi_model* model,
                                        const char* conditions,
                                        const char* split, int jobs,
                                        const char* out_path,
                                        double* pearson_r, size_t* points);

/* ---- gradient check ---- */

/* losses: comma-separated subset of "mse,stoi,cc-stoi" (NULL for all).
 * frames: grid width (0 for the default). Returns CCSTOI_ERR_CHECK_FAILED
 * when any check exceeds its tolerance; report (optional) receives the
 * formatted result either way. */
CCSTOI_API ccstoi_status ccstoi_gradcheck(const ccstoi_settings* settings,
                                          const char* losses, uint64_t seed,
                                          int frames, int network,
                                          int corrupt_gradient, char** report);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* CCSTOI_CCSTOI_H_ */
