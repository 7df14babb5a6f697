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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "common/error.h"
#include "common/rng.h"
#include "loss/losses.h"
#include "octave/octave_bands.h"
#include "oracles.h"

namespace ccstoi {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

Eigen::MatrixXd RandomGrid(int rows, int cols, uint64_t seed, double floor = 0.0) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = std::abs(rng.Gaussian()) + floor;
  return m;
}

// Smooth low-rank magnitudes: band envelopes vary slowly, as in speech.
Eigen::MatrixXd SmoothGrid(int rows, int cols, uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  const double p1 = rng.Uniform(0, 6), p2 = rng.Uniform(0, 6);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(r, c) = 1.0 + 0.6 * std::sin(0.21 * c + 0.05 * r + p1) * std::cos(0.13 * r + p2) +
                0.2 * rng.Uniform();
    }
  }
  return m;
}

TEST(MseLoss, Examples) {
  Eigen::MatrixXd est(2, 1), tgt = Eigen::MatrixXd::Zero(2, 1);
  est << 3, 4;
  const LossValueGrad l = MseLoss(est, tgt);
  EXPECT_DOUBLE_EQ(l.value, 5.0);
  EXPECT_NEAR(l.grad(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(l.grad(1, 0), 0.8, 1e-15);
  const LossValueGrad z = MseLoss(est, est);
  EXPECT_EQ(z.value, 0.0);
  EXPECT_EQ(z.grad.cwiseAbs().maxCoeff(), 0.0);
  const LossValueGrad sq = MseLoss(est, tgt, MseForm::kSquared);
  EXPECT_DOUBLE_EQ(sq.value, 25.0);
  EXPECT_DOUBLE_EQ(sq.grad(1, 0), 8.0);
  EXPECT_EQ(CodeOf([&] { MseLoss(est, Eigen::MatrixXd::Zero(3, 1)); }), ErrorCode::kShape);
}

TEST(MseLoss, GradientMatchesCentralDifferences) {
  for (MseForm form : {MseForm::kFrameNorm, MseForm::kSquared}) {
    Eigen::MatrixXd est = RandomGrid(8, 8, 1);
    const Eigen::MatrixXd tgt = RandomGrid(8, 8, 2);
    const LossValueGrad l = MseLoss(est, tgt, form);
    const double h = 1e-4 * est.cwiseAbs().mean();
    for (Eigen::Index i = 0; i < est.size(); ++i) {
      if (std::abs(l.grad(i)) <= 1e-8) continue;
      const double x0 = est(i);
      est(i) = x0 + h;
      const double up = MseLoss(est, tgt, form).value;
      est(i) = x0 - h;
      const double down = MseLoss(est, tgt, form).value;
      est(i) = x0;
      EXPECT_LT(oracle::RelError(l.grad(i), (up - down) / (2 * h), 0.0), 1e-5) << i;
    }
  }
}

TEST(CcStoiLoss, PerfectEstimateIsMinusOne) {
  const OctaveBandMatrix bands = BuildBandMatrix(16000, 512);
  const Eigen::MatrixXd y = SmoothGrid(257, 40, 3);
  EXPECT_NEAR(CcStoiLoss(y, y, bands, MetricConfig{}).value, -1.0, 1e-14);
  EXPECT_NEAR(CcStoiLoss(0.3 * y, y, bands, MetricConfig{}).value, -1.0, 1e-14);
}

void CheckCcStoiGradient(Eigen::MatrixXd est, const Eigen::MatrixXd& target, double tol) {
  const OctaveBandMatrix bands = BuildBandMatrix(16000, 512);
  const MetricConfig cfg;
  Eigen::MatrixXd margin;
  const LossValueGrad l = CcStoiLoss(est, target, bands, cfg, &margin);
  const double floor = 1e-5 * l.grad.cwiseAbs().maxCoeff();
  const double scale = est.cwiseAbs().mean();
  double worst = 0.0;
  int checked = 0;
  for (int b = 0; b < bands.band_count(); ++b) {
    for (int r = bands.bin_ranges[b].first; r < bands.bin_ranges[b].second; ++r) {
      for (Eigen::Index c = 0; c < est.cols(); ++c) {
        if (margin(b, c) < 1e-2) continue;
        const double x0 = est(r, c);
        auto f = [&](double v) {
          est(r, c) = v;
          const double out = CcStoiLoss(est, target, bands, cfg).value;
          est(r, c) = x0;
          return out;
        };
        const double n = oracle::Derivative(f, x0, 1e-3 * std::max(std::abs(x0), scale));
        worst = std::max(worst, oracle::RelError(l.grad(r, c), n, floor));
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0);
  EXPECT_LT(worst, tol);
}

TEST(CcStoiLoss, GradientMatchesCentralDifferencesOnSmoothGrid) {
  CheckCcStoiGradient(SmoothGrid(257, 64, 4), SmoothGrid(257, 64, 5), 1e-4);
}

TEST(CcStoiLoss, GradientMatchesCentralDifferencesOnRandomGrid) {
  CheckCcStoiGradient(RandomGrid(257, 30, 6, 0.05), RandomGrid(257, 30, 7, 0.05), 1e-4);
}

TEST(CcStoiLoss, GradientWithClippedEntries) {
  // Target with deep dips so that many normalized estimate entries clip.
  Eigen::MatrixXd target = SmoothGrid(257, 40, 8);
  for (Eigen::Index c = 0; c < 40; c += 5) target.col(c) *= 0.01;
  CheckCcStoiGradient(SmoothGrid(257, 40, 9), target, 1e-4);
}

TEST(CcStoiLoss, UnusedBinsHaveZeroGradient) {
  const OctaveBandMatrix bands = BuildBandMatrix(16000, 512);
  const LossValueGrad l =
      CcStoiLoss(SmoothGrid(257, 35, 10), SmoothGrid(257, 35, 11), bands, MetricConfig{});
  for (int r = 0; r < bands.bin_ranges[0].first; ++r) EXPECT_EQ(l.grad.row(r).cwiseAbs().maxCoeff(), 0.0);
  for (int r = bands.bin_ranges[14].second; r < 257; ++r) {
    EXPECT_EQ(l.grad.row(r).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(CcStoiLoss, SmallStepAgainstGradientDescends) {
  const OctaveBandMatrix bands = BuildBandMatrix(16000, 512);
  const Eigen::MatrixXd est = SmoothGrid(257, 40, 12), tgt = SmoothGrid(257, 40, 13);
  const LossValueGrad l = CcStoiLoss(est, tgt, bands, MetricConfig{});
  const double step = 1e-3 * est.norm() / l.grad.norm();
  EXPECT_LT(CcStoiLoss(est - step * l.grad, tgt, bands, MetricConfig{}).value, l.value);
}

TEST(CcStoiLoss, Errors) {
  const OctaveBandMatrix bands = BuildBandMatrix(16000, 512);
  const Eigen::MatrixXd y = SmoothGrid(257, 29, 1);
  EXPECT_EQ(CodeOf([&] { CcStoiLoss(y, y, bands, MetricConfig{}); }), ErrorCode::kTooShort);
  Eigen::MatrixXd bad = SmoothGrid(257, 30, 1);
  bad(10, 3) = std::nan("");
  EXPECT_EQ(CodeOf([&] { CcStoiLoss(bad, SmoothGrid(257, 30, 2), bands, MetricConfig{}); }),
            ErrorCode::kNumeric);
  MetricConfig cca;
  cca.correlation = CorrelationKind::kCca;
  const Eigen::MatrixXd ok = SmoothGrid(257, 30, 1);
  EXPECT_EQ(CodeOf([&] { CcStoiLoss(ok, ok, bands, cca); }), ErrorCode::kConfig);
}

TEST(ComputeLoss, Dispatch) {
  const OctaveBandMatrix bands = BuildBandMatrix(16000, 512);
  const Eigen::MatrixXd a = SmoothGrid(257, 32, 1), b = SmoothGrid(257, 32, 2);
  EXPECT_EQ(ComputeLoss(LossKind::kMse, a, b, bands, MetricConfig{}).value, MseLoss(a, b).value);
  EXPECT_EQ(ComputeLoss(LossKind::kMse, a, b, bands, MetricConfig{}, MseForm::kSquared).value,
            MseLoss(a, b, MseForm::kSquared).value);
  const double cc = CcStoiLoss(a, b, bands, MetricConfig{}).value;
  EXPECT_EQ(ComputeLoss(LossKind::kCcStoi, a, b, bands, MetricConfig{}).value, cc);
  EXPECT_EQ(ComputeLoss(LossKind::kStoi, a, b, bands, MetricConfig{}).value, cc);
  EXPECT_EQ(ParseLossKind("cc-stoi"), LossKind::kCcStoi);
  EXPECT_EQ(ParseLossKind("mse"), LossKind::kMse);
  EXPECT_EQ(ParseLossKind("stoi"), LossKind::kStoi);
  EXPECT_EQ(CodeOf([] { ParseLossKind("l1"); }), ErrorCode::kConfig);
}

TEST(MeanOverBatch, AveragesIndependently) {
  const OctaveBandMatrix bands = BuildBandMatrix(16000, 512);
  const LossValueGrad a = CcStoiLoss(SmoothGrid(257, 30, 1), SmoothGrid(257, 30, 2), bands, MetricConfig{});
  const LossValueGrad b = CcStoiLoss(SmoothGrid(257, 40, 3), SmoothGrid(257, 40, 4), bands, MetricConfig{});
  const BatchLoss batch = MeanOverBatch({a, b});
  EXPECT_DOUBLE_EQ(batch.value, 0.5 * (a.value + b.value));
  ASSERT_EQ(batch.grads.size(), 2u);
  EXPECT_EQ((batch.grads[0] - 0.5 * a.grad).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((batch.grads[1] - 0.5 * b.grad).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FiniteDiffGrad, Examples) {
  const Eigen::MatrixXd x = RandomGrid(4, 5, 9);
  const Eigen::MatrixXd g1 = FiniteDiffGrad([](const Eigen::MatrixXd& m) { return m.sum(); }, x, 1e-4);
  EXPECT_LT((g1 - Eigen::MatrixXd::Ones(4, 5)).cwiseAbs().maxCoeff(), 1e-9);
  const Eigen::MatrixXd g2 =
      FiniteDiffGrad([](const Eigen::MatrixXd& m) { return 0.5 * m.squaredNorm(); }, x, 1e-4);
  EXPECT_LT((g2 - x).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_EQ(CodeOf([&] { FiniteDiffGrad([](const Eigen::MatrixXd&) { return 0.0; }, x, 0.0); }),
            ErrorCode::kInvalidArgument);
}

TEST(FiniteDiffGrad, AgreesWithCcStoiGradientOnToyGrid) {
  const OctaveBandMatrix bands = BuildBandMatrix(16000, 512);
  const Eigen::MatrixXd est = SmoothGrid(257, 30, 20), tgt = SmoothGrid(257, 30, 21);
  Eigen::MatrixXd margin;
  const LossValueGrad l = CcStoiLoss(est, tgt, bands, MetricConfig{}, &margin);
  const Eigen::MatrixXd fd = FiniteDiffGrad(
      [&](const Eigen::MatrixXd& m) { return CcStoiLoss(m, tgt, bands, MetricConfig{}).value; }, est,
      1e-5);
  const double floor = 1e-5 * l.grad.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (int b = 0; b < bands.band_count(); ++b) {
    for (int r = bands.bin_ranges[b].first; r < bands.bin_ranges[b].second; ++r) {
      for (int c = 0; c < 30; ++c) {
        if (margin(b, c) >= 1e-2) worst = std::max(worst, oracle::RelError(l.grad(r, c), fd(r, c), floor));
      }
    }
  }
  EXPECT_LT(worst, 1e-4);
}

}  // namespace
}  // namespace ccstoi
