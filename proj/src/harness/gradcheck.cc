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

#include "harness/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "common/error.h"
#include "common/rng.h"
#include "corpus/mix.h"
#include "octave/octave_bands.h"
#include "signal/synthetic.h"
#include "spectral/stft.h"

namespace ccstoi {
namespace {

constexpr int kRate = 16000;
// Central-difference step relative to the entry's own magnitude (floored at
// a fraction of the grid's mean magnitude).
constexpr double kRelativeStep = 1e-3;
constexpr double kFloorRatio = 1e-5;

struct Grid {
  Eigen::MatrixXd estimate;
  Eigen::MatrixXd target;
};

Grid MakeGrid(const StftConfig& stft, int frames, uint64_t seed) {
  const double duration =
      static_cast<double>((frames - 1) * stft.hop + stft.frame_len) / kRate;
  const Waveform clean = SyntheticSpeech(duration, MixSeed(seed, 1), kRate);
  const Waveform noise = WhiteNoise(duration, MixSeed(seed, 2), kRate);
  const MixResult mix = MixAtSnr(clean, noise, 0.0, MixSeed(seed, 3));
  Grid g;
  g.target = Stft(mix.clean, stft).Magnitude();
  g.estimate = Stft(mix.mixture, stft).Magnitude();
  return g;
}

double Step(double x, double scale) {
  return kRelativeStep * std::max(std::abs(x), scale);
}

void Corrupt(Eigen::MatrixXd* grad) {
  Eigen::Index r = 0, c = 0;
  grad->cwiseAbs().maxCoeff(&r, &c);
  (*grad)(r, c) *= 1.01;
}

GradCheckLine CheckLoss(LossKind kind, const GradCheckOptions& o) {
  GradCheckLine line;
  line.name = std::string("loss ") + LossKindName(kind);
  line.tolerance = o.loss_tolerance;
  const OctaveBandMatrix bands = BuildBandMatrix(kRate, o.metric.stft.fft_len);
  for (int k = 0; k < o.grids; ++k) {
    const Grid g = MakeGrid(o.metric.stft, o.frames, MixSeed(o.seed, k));
    Eigen::MatrixXd margin;
    LossValueGrad lv;
    if (kind == LossKind::kMse) {
      lv = MseLoss(g.estimate, g.target, o.mse_form);
    } else {
      lv = CcStoiLoss(g.estimate, g.target, bands, o.metric, &margin);
    }
    if (o.corrupt_gradient) Corrupt(&lv.grad);
    auto f = [&](const Eigen::MatrixXd& x) {
      return ComputeLoss(kind, x, g.target, bands, o.metric, o.mse_form).value;
    };
    const double scale = g.estimate.cwiseAbs().mean();
    const double floor = kFloorRatio * lv.grad.cwiseAbs().maxCoeff();
    Eigen::MatrixXd x = g.estimate;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        if (kind != LossKind::kMse) {
          bool near_kink = false;
          for (int b = 0; b < bands.band_count(); ++b) {
            const auto [lo, hi] = bands.bin_ranges[b];
            if (r >= lo && r < hi && margin(b, c) < o.clip_exclusion) {
              near_kink = true;
            }
          }
          if (near_kink) {
            ++line.excluded;
            continue;
          }
        }
        const double x0 = x(r, c);
        auto central = [&](double h) {
          x(r, c) = x0 + h;
          const double up = f(x);
          x(r, c) = x0 - h;
          const double down = f(x);
          x(r, c) = x0;
          return (up - down) / (2 * h);
        };
        const double h = Step(x0, scale);
        double numeric = central(h);
        double err = RelativeError(lv.grad(r, c), numeric, floor);
        if (err > 0.1 * o.loss_tolerance) {
          // One Richardson step cancels the h^2 truncation term.
          numeric = (4 * central(h / 2) - numeric) / 3;
          err = RelativeError(lv.grad(r, c), numeric, floor);
        }
        line.max_rel_error = std::max(line.max_rel_error, err);
        ++line.checked;
      }
    }
  }
  line.pass = line.checked > 0 && line.max_rel_error < line.tolerance;
  return line;
}

GradCheckLine CheckNetwork(const GradCheckOptions& o) {
  GradCheckLine line;
  line.name = "network cc-stoi";
  line.tolerance = o.network_tolerance;
  const OctaveBandMatrix bands = BuildBandMatrix(kRate, o.metric.stft.fft_len);
  nn::MaskNetConfig cfg = o.net;
  cfg.seed = MixSeed(o.seed, 0x6e);
  const nn::MaskNet net(cfg);
  const Grid g = MakeGrid(o.metric.stft, o.frames, MixSeed(o.seed, 0x6f));
  auto loss = [&](const Eigen::MatrixXd& enhanced) {
    return CcStoiLoss(enhanced, g.target, bands, o.metric);
  };
  std::vector<double> grad;
  net.Backprop(g.estimate, loss, &grad);
  double gmax = 0.0;
  for (double v : grad) gmax = std::max(gmax, std::abs(v));
  const double floor = kFloorRatio * gmax;

  Rng rng(MixSeed(o.seed, 0x70));
  std::vector<size_t> picks;
  const size_t count = std::min<size_t>(o.network_parameters, grad.size());
  while (picks.size() < count) {
    const size_t i = rng.Below(grad.size());
    if (std::find(picks.begin(), picks.end(), i) == picks.end()) picks.push_back(i);
  }
  std::sort(picks.begin(), picks.end());
  if (o.corrupt_gradient) {
    const auto it = std::max_element(picks.begin(), picks.end(), [&](size_t a, size_t b) {
      return std::abs(grad[a]) < std::abs(grad[b]);
    });
    grad[*it] *= 1.01;
  }
  for (size_t i : picks) {
    std::vector<double> params = net.parameters();
    const double p0 = params[i];
    const double h = 1e-4 * std::max(std::abs(p0), 1e-2);
    params[i] = p0 + h;
    const double up = loss(nn::MaskNet(cfg, params).Forward(g.estimate).enhanced).value;
    params[i] = p0 - h;
    const double down =
        loss(nn::MaskNet(cfg, params).Forward(g.estimate).enhanced).value;
    const double numeric = (up - down) / (2 * h);
    line.max_rel_error =
        std::max(line.max_rel_error, RelativeError(grad[i], numeric, floor));
    ++line.checked;
  }
  line.pass = line.checked > 0 && line.max_rel_error < line.tolerance;
  return line;
}

}  // namespace

double RelativeError(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  if (denom == 0.0) return 0.0;
  return std::abs(analytic - numeric) / denom;
}

bool GradCheckReport::pass() const {
  if (lines.empty()) return false;
  for (const GradCheckLine& l : lines) {
    if (!l.pass) return false;
  }
  return true;
}

std::string GradCheckReport::Format() const {
  std::ostringstream out;
  for (const GradCheckLine& l : lines) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%-18s max_rel_error=%.3e tol=%.0e checked=%zu excluded=%zu %s\n",
                  l.name.c_str(), l.max_rel_error, l.tolerance, l.checked,
                  l.excluded, l.pass ? "PASS" : "FAIL");
    out << buf;
  }
  out << (pass() ? "gradcheck passed\n" : "gradcheck FAILED\n");
  return out.str();
}

GradCheckReport RunGradCheck(const GradCheckOptions& options) {
  options.metric.Validate();
  Require(options.grids >= 1, ErrorCode::kInvalidArgument, "grids must be >= 1");
  Require(options.frames >= options.metric.segment_frames,
          ErrorCode::kInvalidArgument,
          "gradcheck grids need at least one full segment of frames");
  GradCheckReport report;
  for (LossKind kind : options.losses) report.lines.push_back(CheckLoss(kind, options));
  if (options.network) report.lines.push_back(CheckNetwork(options));
  return report;
}

}  // namespace ccstoi
