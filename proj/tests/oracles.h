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

// Straight-line reference implementations used to check the library. They
// share no code with src/ beyond the Waveform container.

#ifndef CCSTOI_TESTS_ORACLES_H_
#define CCSTOI_TESTS_ORACLES_H_

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "signal/waveform.h"

namespace ccstoi::oracle {

// |DFT| of Hann-windowed frames by direct summation. Rows are bins 0..fft/2,
// columns are frames starting at t * hop.
inline Eigen::MatrixXd NaiveMagnitude(const std::vector<double>& x, int frame,
                                      int hop, int fft) {
  const int frames = static_cast<int>((x.size() - frame) / hop) + 1;
  const int bins = fft / 2 + 1;
  std::vector<double> window(frame);
  for (int n = 0; n < frame; ++n) {
    window[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / (frame - 1));
  }
  std::vector<double> cosines(fft), sines(fft);
  for (int n = 0; n < fft; ++n) {
    cosines[n] = std::cos(2.0 * std::numbers::pi * n / fft);
    sines[n] = std::sin(2.0 * std::numbers::pi * n / fft);
  }
  Eigen::MatrixXd mag(bins, frames);
  std::vector<double> buf(frame);
  for (int t = 0; t < frames; ++t) {
    for (int n = 0; n < frame; ++n) buf[n] = x[t * hop + n] * window[n];
    for (int k = 0; k < bins; ++k) {
      double re = 0.0, im = 0.0;
      for (int n = 0; n < frame; ++n) {
        const int idx = static_cast<int>((static_cast<long>(k) * n) % fft);
        re += buf[n] * cosines[idx];
        im -= buf[n] * sines[idx];
      }
      mag(k, t) = std::hypot(re, im);
    }
  }
  return mag;
}

// Envelopes of the 15 third-octave bands centred at 150 * 2^(k/3) Hz.
inline Eigen::MatrixXd NaiveEnvelopes(const Eigen::MatrixXd& mag, int rate,
                                      int fft) {
  Eigen::MatrixXd env = Eigen::MatrixXd::Zero(15, mag.cols());
  for (int b = 0; b < 15; ++b) {
    const double center = 150.0 * std::pow(2.0, b / 3.0);
    const double lo = center / std::pow(2.0, 1.0 / 6.0);
    const double hi = center * std::pow(2.0, 1.0 / 6.0);
    for (int t = 0; t < mag.cols(); ++t) {
      double energy = 0.0;
      for (int k = 0; k < mag.rows(); ++k) {
        const double f = static_cast<double>(k) * rate / fft;
        if (f >= lo && f < hi) energy += mag(k, t) * mag(k, t);
      }
      env(b, t) = std::sqrt(energy);
    }
  }
  return env;
}

// Per-band, per-segment correlation of the clipped, level-matched estimate,
// averaged over I * (M - N + 1), exactly as written out on paper.
inline double LiteralCcStoi(const Eigen::MatrixXd& y_env,
                            const Eigen::MatrixXd& yh_env, int n_frames,
                            double beta_db) {
  const int bands = static_cast<int>(y_env.rows());
  const int m = static_cast<int>(y_env.cols());
  const double bound = 1.0 + std::pow(10.0, -beta_db / 20.0);
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < bands; ++i) {
    for (int j = n_frames - 1; j < m; ++j) {
      std::vector<double> y(n_frames), yh(n_frames);
      for (int k = 0; k < n_frames; ++k) {
        y[k] = y_env(i, j - n_frames + 1 + k);
        yh[k] = yh_env(i, j - n_frames + 1 + k);
      }
      double ny = 0.0, nh = 0.0;
      for (int k = 0; k < n_frames; ++k) {
        ny += y[k] * y[k];
        nh += yh[k] * yh[k];
      }
      ny = std::sqrt(ny);
      nh = std::sqrt(nh);
      for (int k = 0; k < n_frames; ++k) {
        const double scaled = nh > 1e-12 ? yh[k] * ny / nh : 0.0;
        yh[k] = std::min(scaled, bound * y[k]);
      }
      double my = 0.0, mh = 0.0;
      for (int k = 0; k < n_frames; ++k) {
        my += y[k];
        mh += yh[k];
      }
      my /= n_frames;
      mh /= n_frames;
      double num = 0.0, dy = 0.0, dh = 0.0;
      for (int k = 0; k < n_frames; ++k) {
        num += (y[k] - my) * (yh[k] - mh);
        dy += (y[k] - my) * (y[k] - my);
        dh += (yh[k] - mh) * (yh[k] - mh);
      }
      dy = std::sqrt(dy);
      dh = std::sqrt(dh);
      const double d = (dy < 1e-12 || dh < 1e-12) ? 0.0 : num / (dy * dh);
      sum += std::clamp(d, -1.0, 1.0);
      ++count;
    }
  }
  return sum / count;
}

// Full 16 kHz pipeline: 512-sample frames, hop 256, FFT 512, N = 30.
inline double LiteralCcStoi(const Waveform& clean, const Waveform& estimate) {
  const Eigen::MatrixXd y = NaiveEnvelopes(
      NaiveMagnitude(clean.samples, 512, 256, 512), clean.sample_rate, 512);
  const Eigen::MatrixXd yh = NaiveEnvelopes(
      NaiveMagnitude(estimate.samples, 512, 256, 512), clean.sample_rate, 512);
  return LiteralCcStoi(y, yh, 30, -15.0);
}

// Largest generalized eigenvalue of
//   [0 Cxy; Cyx 0] v = rho [Cxx 0; 0 Cyy] v
// with (N - 1)-normalized covariances and a ridge on the diagonal blocks.
inline double CcaGeneralizedEigen(const Eigen::MatrixXd& x,
                                  const Eigen::MatrixXd& y, double ridge) {
  const Eigen::Index p = x.rows();
  const Eigen::Index n = x.cols();
  Eigen::MatrixXd xc = x, yc = y;
  for (Eigen::Index r = 0; r < p; ++r) {
    xc.row(r).array() -= x.row(r).mean();
    yc.row(r).array() -= y.row(r).mean();
  }
  const double s = 1.0 / static_cast<double>(n - 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  a.topRightCorner(p, p) = s * xc * yc.transpose();
  a.bottomLeftCorner(p, p) = s * yc * xc.transpose();
  b.topLeftCorner(p, p) =
      s * xc * xc.transpose() + ridge * Eigen::MatrixXd::Identity(p, p);
  b.bottomRightCorner(p, p) =
      s * yc * yc.transpose() + ridge * Eigen::MatrixXd::Identity(p, p);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b);
  return solver.eigenvalues().maxCoeff();
}

// Central difference with one Richardson refinement:
// (4 D(h/2) - D(h)) / 3, where D(h) = (f(x + h) - f(x - h)) / 2h.
inline double Derivative(const std::function<double(double)>& f, double x,
                         double h) {
  auto d = [&](double step) { return (f(x + step) - f(x - step)) / (2 * step); };
  return (4 * d(h / 2) - d(h)) / 3;
}

inline double RelError(double a, double b, double floor) {
  const double denom = std::max({std::abs(a), std::abs(b), floor});
  return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

}  // namespace ccstoi::oracle

#endif  // CCSTOI_TESTS_ORACLES_H_
