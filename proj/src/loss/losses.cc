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

#include "loss/losses.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/error.h"

namespace ccstoi {
namespace {

void RequireFinite(const Eigen::MatrixXd& m, const char* what) {
  Require(m.allFinite(), ErrorCode::kNumeric,
          std::string(what) + " contains non-finite values");
}

void RequireSameShape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::kShape,
          "estimate is " + std::to_string(a.rows()) + "x" +
              std::to_string(a.cols()) + " but target is " +
              std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace

const char* LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kMse:
      return "mse";
    case LossKind::kStoi:
      return "stoi";
    case LossKind::kCcStoi:
      return "cc-stoi";
  }
  return "?";
}

LossKind ParseLossKind(const std::string& name) {
  if (name == "mse") return LossKind::kMse;
  if (name == "stoi") return LossKind::kStoi;
  if (name == "cc-stoi") return LossKind::kCcStoi;
  Fail(ErrorCode::kConfig, "unknown loss '" + name + "'");
}

LossValueGrad MseLoss(const Eigen::MatrixXd& estimate,
                      const Eigen::MatrixXd& target, MseForm form, double eps) {
  RequireSameShape(estimate, target);
  Require(estimate.cols() > 0, ErrorCode::kShape, "empty magnitude grid");
  const double frames = static_cast<double>(estimate.cols());
  LossValueGrad out;
  const Eigen::MatrixXd residual = estimate - target;
  out.grad = Eigen::MatrixXd::Zero(estimate.rows(), estimate.cols());
  for (Eigen::Index t = 0; t < residual.cols(); ++t) {
    const double norm = residual.col(t).norm();
    if (form == MseForm::kSquared) {
      out.value += norm * norm / frames;
      out.grad.col(t) = 2.0 * residual.col(t) / frames;
    } else {
      out.value += norm / frames;
      if (norm >= eps) out.grad.col(t) = residual.col(t) / (frames * norm);
    }
  }
  return out;
}

LossValueGrad CcStoiLoss(const Eigen::MatrixXd& estimate,
                         const Eigen::MatrixXd& target,
                         const OctaveBandMatrix& bands, const MetricConfig& cfg,
                         Eigen::MatrixXd* clip_margin) {
  RequireSameShape(estimate, target);
  RequireFinite(estimate, "estimate");
  RequireFinite(target, "target");
  Require(cfg.correlation == CorrelationKind::kPearson, ErrorCode::kConfig,
          "the intelligibility loss is defined for the Pearson correlation");
  const int n = cfg.segment_frames;
  Require(estimate.cols() >= n, ErrorCode::kTooShort,
          std::to_string(estimate.cols()) + " frames cannot hold a " +
              std::to_string(n) + "-frame segment");

  const Eigen::MatrixXd env = BandEnvelopes(target, bands);
  const Eigen::MatrixXd env_hat = BandEnvelopes(estimate, bands);
  const int num_bands = static_cast<int>(env.rows());
  const int frames = static_cast<int>(env.cols());
  const int segments = frames - n + 1;
  const double scale = 1.0 / (static_cast<double>(num_bands) * segments);
  const double clip = ClipFactor(cfg.beta_db);

  Eigen::MatrixXd env_grad = Eigen::MatrixXd::Zero(num_bands, frames);
  if (clip_margin) {
    clip_margin->setConstant(num_bands, frames,
                             std::numeric_limits<double>::infinity());
  }

  double total = 0.0;
  Eigen::VectorXd x(n), v(n), u(n), c(n), z(n), pass(n);
  for (int i = 0; i < num_bands; ++i) {
    for (int j = 0; j < segments; ++j) {
      x = env.row(i).segment(j, n).transpose();
      v = env_hat.row(i).segment(j, n).transpose();
      const double norm_v = v.norm();
      if (norm_v < cfg.eps) continue;
      const double alpha = x.norm() / norm_v;
      u = alpha * v;
      c = clip * x;
      for (int k = 0; k < n; ++k) {
        const bool clipped = u(k) > c(k);
        z(k) = clipped ? c(k) : u(k);
        pass(k) = clipped ? 0.0 : 1.0;
        if (clip_margin) {
          const double margin = std::abs(u(k) - c(k)) / (c(k) + cfg.eps);
          double& slot = (*clip_margin)(i, j + k);
          slot = std::min(slot, margin);
        }
      }
      const Eigen::VectorXd xc = x.array() - x.mean();
      const Eigen::VectorXd zc = z.array() - z.mean();
      const double norm_x = xc.norm();
      const double norm_z = zc.norm();
      if (norm_x < cfg.eps || norm_z < cfg.eps) continue;
      const double d = xc.dot(zc) / (norm_x * norm_z);
      total += d;

      // d(corr)/dz is already orthogonal to the constant vector, so the
      // centering step needs no separate term.
      const Eigen::VectorXd grad_z = (xc / norm_x - d * zc / norm_z) / norm_z;
      const Eigen::VectorXd grad_u = grad_z.cwiseProduct(pass);
      const Eigen::VectorXd grad_v =
          alpha * (grad_u - v * (v.dot(grad_u) / (norm_v * norm_v)));
      env_grad.row(i).segment(j, n) -= scale * grad_v.transpose();
    }
  }

  LossValueGrad out;
  out.value = -total * scale;
  out.grad = Eigen::MatrixXd::Zero(estimate.rows(), estimate.cols());
  for (int i = 0; i < num_bands; ++i) {
    const auto [first, last] = bands.bin_ranges[i];
    for (int t = 0; t < frames; ++t) {
      const double e = env_hat(i, t);
      if (e <= 0.0) continue;
      const double g = env_grad(i, t) / e;
      for (int f = first; f < last; ++f) {
        out.grad(f, t) = g * bands.weights(i, f) * estimate(f, t);
      }
    }
  }
  Require(out.grad.allFinite() && std::isfinite(out.value), ErrorCode::kNumeric,
          "intelligibility loss produced non-finite values");
  return out;
}

LossValueGrad ComputeLoss(LossKind kind, const Eigen::MatrixXd& estimate,
                          const Eigen::MatrixXd& target,
                          const OctaveBandMatrix& bands,
                          const MetricConfig& cfg, MseForm mse_form) {
  if (kind == LossKind::kMse) return MseLoss(estimate, target, mse_form);
  MetricConfig pearson = cfg;
  pearson.correlation = CorrelationKind::kPearson;
  return CcStoiLoss(estimate, target, bands, pearson);
}

BatchLoss MeanOverBatch(const std::vector<LossValueGrad>& items) {
  BatchLoss out;
  if (items.empty()) return out;
  const double inv = 1.0 / static_cast<double>(items.size());
  for (const LossValueGrad& item : items) {
    out.value += item.value * inv;
    out.grads.push_back(item.grad * inv);
  }
  return out;
}

Eigen::MatrixXd FiniteDiffGrad(
    const std::function<double(const Eigen::MatrixXd&)>& loss,
    const Eigen::MatrixXd& at, double h) {
  Require(h > 0.0, ErrorCode::kInvalidArgument, "step must be positive");
  Eigen::MatrixXd grad(at.rows(), at.cols());
  Eigen::MatrixXd probe = at;
  for (Eigen::Index t = 0; t < at.cols(); ++t) {
    for (Eigen::Index f = 0; f < at.rows(); ++f) {
      const double orig = probe(f, t);
      probe(f, t) = orig + h;
      const double plus = loss(probe);
      probe(f, t) = orig - h;
      const double minus = loss(probe);
      probe(f, t) = orig;
      grad(f, t) = (plus - minus) / (2.0 * h);
    }
  }
  return grad;
}

}  // namespace ccstoi
