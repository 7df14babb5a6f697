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

#ifndef CCSTOI_METRICS_INTELLIGIBILITY_H_
#define CCSTOI_METRICS_INTELLIGIBILITY_H_

#include <Eigen/Dense>

#include "octave/octave_bands.h"
#include "signal/waveform.h"
#include "spectral/stft.h"

namespace ccstoi {

enum class MetricMode { kClassicStoi, kModifiedStoi, kCcStoi };

// How a CC-STOI segment pair is scored. kPearson scores each band segment
// with the centered correlation coefficient; kCca scores all bands of a
// segment jointly by their first canonical correlation.
enum class CorrelationKind { kPearson, kCca };

struct MetricConfig {
  MetricMode mode = MetricMode::kCcStoi;
  CorrelationKind correlation = CorrelationKind::kPearson;
  double beta_db = -15.0;
  int segment_frames = kDefaultSegmentFrames;
  StftConfig stft = DefaultStftConfig();
  double eps = 1e-12;
  double silence_db = kDefaultSilenceDb;
  double cca_ridge = 1e-3;

  void Validate() const;
};

const char* MetricModeName(MetricMode mode);
MetricMode ParseMetricMode(const std::string& name);

// Upper bound multiplier applied to the clean envelope when clipping:
// 1 + 10^(-beta_db / 20).
double ClipFactor(double beta_db);

// Centered correlation coefficient of two equal-length vectors; 0 when either
// centered norm is below eps.
double SegmentCorrelation(const Eigen::Ref<const Eigen::VectorXd>& y,
                          const Eigen::Ref<const Eigen::VectorXd>& y_hat,
                          double eps = 1e-12);

// Scales y_hat to the norm of y, then clips each entry at ClipFactor * y.
// A y_hat with norm below eps yields the zero segment.
Eigen::VectorXd ClipAndNormalize(const Eigen::Ref<const Eigen::VectorXd>& y,
                                 const Eigen::Ref<const Eigen::VectorXd>& y_hat,
                                 double beta_db, double eps = 1e-12);

// First canonical correlation between the rows (variables) of two I x N
// matrices whose columns are observations, with ridge-regularized
// covariances. Clamped to [0, 1].
double SegmentCca(const Eigen::MatrixXd& y, const Eigen::MatrixXd& y_hat,
                  double ridge);

// Envelope-domain score: segments both envelope grids, clips/normalizes each
// estimated segment and averages the per-segment scores.
double EnvelopeIntelligibility(const Eigen::MatrixXd& clean_env,
                               const Eigen::MatrixXd& est_env,
                               const MetricConfig& cfg);

// Magnitude-domain score (band reduction followed by the envelope score).
double SpectralIntelligibility(const Eigen::MatrixXd& clean_mag,
                               const Eigen::MatrixXd& est_mag,
                               const OctaveBandMatrix& bands,
                               const MetricConfig& cfg);

// Native-rate front end without silent-frame removal; the correlation kind is
// taken from cfg.
double CcStoi(const Waveform& clean, const Waveform& estimate,
              const MetricConfig& cfg);

// Same front end as CcStoi, always with the Pearson correlation.
double ModifiedStoi(const Waveform& clean, const Waveform& estimate,
                    const MetricConfig& cfg);

// Resamples to 10 kHz, removes silent frames and uses 256-sample frames.
double ClassicStoi(const Waveform& clean, const Waveform& estimate,
                   const MetricConfig& cfg);

// Dispatches on cfg.mode.
double Intelligibility(const Waveform& clean, const Waveform& estimate,
                       const MetricConfig& cfg);

// Speech distortion index: sum (estimate - clean)^2 / sum clean^2.
double Sdi(const Waveform& clean, const Waveform& estimate);

}  // namespace ccstoi

#endif  // CCSTOI_METRICS_INTELLIGIBILITY_H_
