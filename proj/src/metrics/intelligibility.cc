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

#include "metrics/intelligibility.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "common/error.h"
#include "signal/resample.h"

namespace ccstoi {
namespace {

constexpr int kClassicRate = 10000;

void CheckPair(const Waveform& clean, const Waveform& estimate) {
  Require(clean.size() == estimate.size(), ErrorCode::kShape,
          "clean and estimate lengths differ (" + std::to_string(clean.size()) +
              " vs " + std::to_string(estimate.size()) + ")");
  Require(clean.sample_rate == estimate.sample_rate, ErrorCode::kShape,
          "clean and estimate sample rates differ");
}

Eigen::MatrixXd InverseSqrt(const Eigen::MatrixXd& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  Eigen::VectorXd inv = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv(i) = inv(i) > 0.0 ? 1.0 / std::sqrt(inv(i)) : 0.0;
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

double NativeFrontEnd(const Waveform& clean, const Waveform& estimate,
                      const MetricConfig& cfg) {
  CheckPair(clean, estimate);
  const Spectrogram c = Stft(clean, cfg.stft);
  const Spectrogram e = Stft(estimate, cfg.stft);
  const OctaveBandMatrix bands =
      BuildBandMatrix(clean.sample_rate, cfg.stft.fft_len);
  return SpectralIntelligibility(c.Magnitude(), e.Magnitude(), bands, cfg);
}

}  // namespace

void MetricConfig::Validate() const {
  Require(beta_db < 0.0, ErrorCode::kConfig, "beta_db must be negative");
  Require(segment_frames >= 2, ErrorCode::kConfig,
          "segment_frames must be at least 2");
  Require(eps > 0.0, ErrorCode::kConfig, "eps must be positive");
  Require(cca_ridge >= 0.0, ErrorCode::kConfig, "cca_ridge must be >= 0");
  stft.Validate();
}

const char* MetricModeName(MetricMode mode) {
  switch (mode) {
    case MetricMode::kClassicStoi:
      return "classic-stoi";
    case MetricMode::kModifiedStoi:
      return "modified-stoi";
    case MetricMode::kCcStoi:
      return "cc-stoi";
  }
  return "?";
}

MetricMode ParseMetricMode(const std::string& name) {
  if (name == "classic-stoi") return MetricMode::kClassicStoi;
  if (name == "modified-stoi") return MetricMode::kModifiedStoi;
  if (name == "cc-stoi") return MetricMode::kCcStoi;
  Fail(ErrorCode::kConfig, "unknown metric mode '" + name + "'");
}

double ClipFactor(double beta_db) {
  return 1.0 + std::pow(10.0, -beta_db / 20.0);
}

double SegmentCorrelation(const Eigen::Ref<const Eigen::VectorXd>& y,
                          const Eigen::Ref<const Eigen::VectorXd>& y_hat,
                          double eps) {
  Require(y.size() == y_hat.size(), ErrorCode::kShape,
          "segment lengths differ");
  Require(y.size() >= 2, ErrorCode::kShape, "segments need at least 2 frames");
  const Eigen::VectorXd a = y.array() - y.mean();
  const Eigen::VectorXd b = y_hat.array() - y_hat.mean();
  const double na = a.norm();
  const double nb = b.norm();
  if (na < eps || nb < eps) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

Eigen::VectorXd ClipAndNormalize(const Eigen::Ref<const Eigen::VectorXd>& y,
                                 const Eigen::Ref<const Eigen::VectorXd>& y_hat,
                                 double beta_db, double eps) {
  Require(y.size() == y_hat.size(), ErrorCode::kShape,
          "segment lengths differ");
  const double norm_hat = y_hat.norm();
  if (norm_hat < eps) return Eigen::VectorXd::Zero(y.size());
  const Eigen::VectorXd scaled = y_hat * (y.norm() / norm_hat);
  return scaled.cwiseMin(ClipFactor(beta_db) * y);
}

double SegmentCca(const Eigen::MatrixXd& y, const Eigen::MatrixXd& y_hat,
                  double ridge) {
  Require(y.rows() == y_hat.rows() && y.cols() == y_hat.cols(),
          ErrorCode::kShape, "CCA segment shapes differ");
  const Eigen::Index vars = y.rows();
  const Eigen::Index obs = y.cols();
  Require(obs > vars || ridge > 0.0, ErrorCode::kInvalidArgument,
          "CCA needs more observations than variables or a positive ridge");
  Require(obs >= 2, ErrorCode::kShape, "CCA needs at least two observations");

  const Eigen::MatrixXd yc = y.colwise() - y.rowwise().mean();
  const Eigen::MatrixXd hc = y_hat.colwise() - y_hat.rowwise().mean();
  const double norm = 1.0 / static_cast<double>(obs - 1);
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(vars, vars);
  const Eigen::MatrixXd cyy = norm * yc * yc.transpose() + ridge * ident;
  const Eigen::MatrixXd chh = norm * hc * hc.transpose() + ridge * ident;
  const Eigen::MatrixXd cyh = norm * yc * hc.transpose();
  if (!cyy.allFinite() || !chh.allFinite() || !cyh.allFinite()) {
    Fail(ErrorCode::kNumeric, "non-finite covariance in CCA");
  }
  const Eigen::MatrixXd whitened = InverseSqrt(cyy) * cyh * InverseSqrt(chh);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(whitened);
  const double rho = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return std::clamp(rho, 0.0, 1.0);
}

double EnvelopeIntelligibility(const Eigen::MatrixXd& clean_env,
                               const Eigen::MatrixXd& est_env,
                               const MetricConfig& cfg) {
  Require(clean_env.rows() == est_env.rows() &&
              clean_env.cols() == est_env.cols(),
          ErrorCode::kShape, "envelope grids differ in shape");
  const EnvelopeSegments clean = Segment(clean_env, cfg.segment_frames);
  const EnvelopeSegments est = Segment(est_env, cfg.segment_frames);
  const int bands = clean.num_bands();
  const int segments = clean.num_segments();
  const int n = cfg.segment_frames;

  double total = 0.0;
  if (cfg.correlation == CorrelationKind::kPearson) {
    for (int i = 0; i < bands; ++i) {
      for (int j = 0; j < segments; ++j) {
        const Eigen::VectorXd y = clean.segment(i, j).transpose();
        const Eigen::VectorXd clipped = ClipAndNormalize(
            y, est.segment(i, j).transpose(), cfg.beta_db, cfg.eps);
        total += SegmentCorrelation(y, clipped, cfg.eps);
      }
    }
    return total / (static_cast<double>(bands) * segments);
  }

  Eigen::MatrixXd y(bands, n), y_hat(bands, n);
  for (int j = 0; j < segments; ++j) {
    for (int i = 0; i < bands; ++i) {
      y.row(i) = clean.segment(i, j);
      y_hat.row(i) = ClipAndNormalize(y.row(i).transpose(),
                                      est.segment(i, j).transpose(),
                                      cfg.beta_db, cfg.eps)
                         .transpose();
    }
    total += SegmentCca(y, y_hat, cfg.cca_ridge);
  }
  return total / segments;
}

double SpectralIntelligibility(const Eigen::MatrixXd& clean_mag,
                               const Eigen::MatrixXd& est_mag,
                               const OctaveBandMatrix& bands,
                               const MetricConfig& cfg) {
  Require(clean_mag.rows() == est_mag.rows() &&
              clean_mag.cols() == est_mag.cols(),
          ErrorCode::kShape, "magnitude grids differ in shape");
  return EnvelopeIntelligibility(BandEnvelopes(clean_mag, bands),
                                 BandEnvelopes(est_mag, bands), cfg);
}

double CcStoi(const Waveform& clean, const Waveform& estimate,
              const MetricConfig& cfg) {
  cfg.Validate();
  return NativeFrontEnd(clean, estimate, cfg);
}

double ModifiedStoi(const Waveform& clean, const Waveform& estimate,
                    const MetricConfig& cfg) {
  MetricConfig pearson = cfg;
  pearson.correlation = CorrelationKind::kPearson;
  pearson.Validate();
  return NativeFrontEnd(clean, estimate, pearson);
}

double ClassicStoi(const Waveform& clean, const Waveform& estimate,
                   const MetricConfig& cfg) {
  cfg.Validate();
  CheckPair(clean, estimate);
  MetricConfig classic = cfg;
  classic.correlation = CorrelationKind::kPearson;
  classic.stft = ClassicStoiStftConfig();
  const Waveform c = Resample(clean, kClassicRate);
  const Waveform e = Resample(estimate, kClassicRate);
  const SilenceRemovalResult trimmed =
      RemoveSilentFrames(c, {e}, classic.stft, cfg.silence_db);
  return NativeFrontEnd(trimmed.clean, trimmed.others[0], classic);
}

double Intelligibility(const Waveform& clean, const Waveform& estimate,
                       const MetricConfig& cfg) {
  switch (cfg.mode) {
    case MetricMode::kClassicStoi:
      return ClassicStoi(clean, estimate, cfg);
    case MetricMode::kModifiedStoi:
      return ModifiedStoi(clean, estimate, cfg);
    case MetricMode::kCcStoi:
      return CcStoi(clean, estimate, cfg);
  }
  Fail(ErrorCode::kConfig, "unknown metric mode");
}

double Sdi(const Waveform& clean, const Waveform& estimate) {
  CheckPair(clean, estimate);
  double err = 0.0, energy = 0.0;
  for (size_t n = 0; n < clean.size(); ++n) {
    const double d = estimate.samples[n] - clean.samples[n];
    err += d * d;
    energy += clean.samples[n] * clean.samples[n];
  }
  Require(energy > 0.0, ErrorCode::kUndefinedMetric,
          "SDI is undefined for a silent clean signal");
  return err / energy;
}

}  // namespace ccstoi
