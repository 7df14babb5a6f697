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

#include "nn/tape.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "common/error.h"

namespace ccstoi::nn {
namespace {

std::string ShapeString(const std::vector<int>& shape) {
  std::string s = "(";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

size_t Count(const std::vector<int>& shape) {
  size_t n = 1;
  for (int d : shape) n *= static_cast<size_t>(d);
  return n;
}

void RequireRank(const Tensor& t, size_t rank, const char* op) {
  Require(t.shape().size() == rank, ErrorCode::kShape,
          std::string(op) + ": expected rank " + std::to_string(rank) +
              ", got " + ShapeString(t.shape()));
}

int ReflectIndex(int n, int len) {
  if (len == 1) return 0;
  const int period = 2 * (len - 1);
  const int m = n % period;
  return m < len ? m : period - m;
}

}  // namespace

const std::vector<int>& Tensor::shape() const { return tape_->node(id_).shape; }
const std::vector<double>& Tensor::value() const {
  return tape_->node(id_).value;
}
const std::vector<double>& Tensor::grad() const { return tape_->node(id_).grad; }

Tensor Tape::Leaf(std::vector<int> shape, std::vector<double> value) {
  return Record(std::move(shape), std::move(value));
}

Tensor Tape::Record(std::vector<int> shape, std::vector<double> value) {
  Require(Count(shape) == value.size(), ErrorCode::kShape,
          "tensor value count does not match shape " + ShapeString(shape));
  auto node = std::make_unique<Node>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  node->grad.assign(node->value.size(), 0.0);
  nodes_.push_back(std::move(node));
  return Tensor(this, static_cast<int>(nodes_.size() - 1));
}

void Tape::SetBackward(const Tensor& t, std::function<void()> rule) {
  nodes_[t.id()]->backward = std::move(rule);
}

void Tape::Backward(const Tensor& output, std::span<const double> seed) {
  Require(seed.size() == output.size(), ErrorCode::kShape,
          "backward seed size does not match output");
  for (auto& n : nodes_) std::fill(n->grad.begin(), n->grad.end(), 0.0);
  std::copy(seed.begin(), seed.end(), nodes_[output.id()]->grad.begin());
  for (int i = output.id(); i >= 0; --i) {
    if (nodes_[i]->backward) nodes_[i]->backward();
  }
}

Tensor Conv2d(const Tensor& x, const Tensor& w, const Tensor& bias,
              Stride2 stride, Stride2 padding) {
  RequireRank(x, 3, "conv2d");
  RequireRank(w, 4, "conv2d");
  RequireRank(bias, 1, "conv2d");
  const int cin = x.dim(0), h = x.dim(1), wd = x.dim(2);
  const int cout = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  Require(w.dim(1) == cin && bias.dim(0) == cout, ErrorCode::kShape,
          "conv2d: weight " + ShapeString(w.shape()) + " does not fit input " +
              ShapeString(x.shape()));
  const int span_h = h + 2 * padding.freq - kh;
  const int span_w = wd + 2 * padding.time - kw;
  Require(span_h >= 0 && span_w >= 0 && span_h % stride.freq == 0 &&
              span_w % stride.time == 0,
          ErrorCode::kShape,
          "conv2d: stride/padding give a non-integer output for input " +
              ShapeString(x.shape()));
  const int oh = span_h / stride.freq + 1;
  const int ow = span_w / stride.time + 1;

  const std::vector<double>& xv = x.value();
  const std::vector<double>& wv = w.value();
  const std::vector<double>& bv = bias.value();
  std::vector<double> out(static_cast<size_t>(cout) * oh * ow);
  for (int co = 0; co < cout; ++co) {
    double* dst = &out[static_cast<size_t>(co) * oh * ow];
    std::fill(dst, dst + oh * ow, bv[co]);
    for (int ci = 0; ci < cin; ++ci) {
      const double* src = &xv[static_cast<size_t>(ci) * h * wd];
      for (int a = 0; a < kh; ++a) {
        for (int b = 0; b < kw; ++b) {
          const double wt = wv[((static_cast<size_t>(co) * cin + ci) * kh + a) * kw + b];
          for (int y = 0; y < oh; ++y) {
            const int iy = y * stride.freq - padding.freq + a;
            if (iy < 0 || iy >= h) continue;
            for (int t = 0; t < ow; ++t) {
              const int it = t * stride.time - padding.time + b;
              if (it < 0 || it >= wd) continue;
              dst[y * ow + t] += wt * src[iy * wd + it];
            }
          }
        }
      }
    }
  }

  Tape* tape = x.tape();
  Tensor result = tape->Record({cout, oh, ow}, std::move(out));
  const int xi = x.id(), wi = w.id(), bi = bias.id(), ri = result.id();
  tape->SetBackward(result, [=] {
    Tape::Node& xn = tape->node(xi);
    Tape::Node& wn = tape->node(wi);
    Tape::Node& bn = tape->node(bi);
    const std::vector<double>& g = tape->node(ri).grad;
    for (int co = 0; co < cout; ++co) {
      const double* gy = &g[static_cast<size_t>(co) * oh * ow];
      double sum = 0.0;
      for (int k = 0; k < oh * ow; ++k) sum += gy[k];
      bn.grad[co] += sum;
      for (int ci = 0; ci < cin; ++ci) {
        const double* src = &xn.value[static_cast<size_t>(ci) * h * wd];
        double* gsrc = &xn.grad[static_cast<size_t>(ci) * h * wd];
        for (int a = 0; a < kh; ++a) {
          for (int b = 0; b < kw; ++b) {
            const size_t widx = ((static_cast<size_t>(co) * cin + ci) * kh + a) * kw + b;
            const double wt = wn.value[widx];
            double gw = 0.0;
            for (int y = 0; y < oh; ++y) {
              const int iy = y * stride.freq - padding.freq + a;
              if (iy < 0 || iy >= h) continue;
              for (int t = 0; t < ow; ++t) {
                const int it = t * stride.time - padding.time + b;
                if (it < 0 || it >= wd) continue;
                const double gv = gy[y * ow + t];
                gw += gv * src[iy * wd + it];
                gsrc[iy * wd + it] += gv * wt;
              }
            }
            wn.grad[widx] += gw;
          }
        }
      }
    }
  });
  return result;
}

Tensor Conv2dTranspose(const Tensor& x, const Tensor& w, const Tensor& bias,
                       Stride2 stride, Stride2 padding) {
  RequireRank(x, 3, "conv2d_transpose");
  RequireRank(w, 4, "conv2d_transpose");
  RequireRank(bias, 1, "conv2d_transpose");
  const int cin = x.dim(0), h = x.dim(1), wd = x.dim(2);
  const int cout = w.dim(1), kh = w.dim(2), kw = w.dim(3);
  Require(w.dim(0) == cin && bias.dim(0) == cout, ErrorCode::kShape,
          "conv2d_transpose: weight " + ShapeString(w.shape()) +
              " does not fit input " + ShapeString(x.shape()));
  const int oh = (h - 1) * stride.freq - 2 * padding.freq + kh;
  const int ow = (wd - 1) * stride.time - 2 * padding.time + kw;
  Require(oh > 0 && ow > 0, ErrorCode::kShape,
          "conv2d_transpose: empty output");

  const std::vector<double>& xv = x.value();
  const std::vector<double>& wv = w.value();
  const std::vector<double>& bv = bias.value();
  std::vector<double> out(static_cast<size_t>(cout) * oh * ow);
  for (int co = 0; co < cout; ++co) {
    std::fill(out.begin() + static_cast<size_t>(co) * oh * ow,
              out.begin() + static_cast<size_t>(co + 1) * oh * ow, bv[co]);
  }
  for (int ci = 0; ci < cin; ++ci) {
    const double* src = &xv[static_cast<size_t>(ci) * h * wd];
    for (int co = 0; co < cout; ++co) {
      double* dst = &out[static_cast<size_t>(co) * oh * ow];
      for (int a = 0; a < kh; ++a) {
        for (int b = 0; b < kw; ++b) {
          const double wt = wv[((static_cast<size_t>(ci) * cout + co) * kh + a) * kw + b];
          for (int y = 0; y < h; ++y) {
            const int oy = y * stride.freq - padding.freq + a;
            if (oy < 0 || oy >= oh) continue;
            for (int t = 0; t < wd; ++t) {
              const int ot = t * stride.time - padding.time + b;
              if (ot < 0 || ot >= ow) continue;
              dst[oy * ow + ot] += wt * src[y * wd + t];
            }
          }
        }
      }
    }
  }

  Tape* tape = x.tape();
  Tensor result = tape->Record({cout, oh, ow}, std::move(out));
  const int xi = x.id(), wi = w.id(), bi = bias.id(), ri = result.id();
  tape->SetBackward(result, [=] {
    Tape::Node& xn = tape->node(xi);
    Tape::Node& wn = tape->node(wi);
    Tape::Node& bn = tape->node(bi);
    const std::vector<double>& g = tape->node(ri).grad;
    for (int co = 0; co < cout; ++co) {
      double sum = 0.0;
      for (int k = 0; k < oh * ow; ++k) sum += g[static_cast<size_t>(co) * oh * ow + k];
      bn.grad[co] += sum;
    }
    for (int ci = 0; ci < cin; ++ci) {
      const double* src = &xn.value[static_cast<size_t>(ci) * h * wd];
      double* gsrc = &xn.grad[static_cast<size_t>(ci) * h * wd];
      for (int co = 0; co < cout; ++co) {
        const double* gy = &g[static_cast<size_t>(co) * oh * ow];
        for (int a = 0; a < kh; ++a) {
          for (int b = 0; b < kw; ++b) {
            const size_t widx = ((static_cast<size_t>(ci) * cout + co) * kh + a) * kw + b;
            const double wt = wn.value[widx];
            double gw = 0.0;
            for (int y = 0; y < h; ++y) {
              const int oy = y * stride.freq - padding.freq + a;
              if (oy < 0 || oy >= oh) continue;
              for (int t = 0; t < wd; ++t) {
                const int ot = t * stride.time - padding.time + b;
                if (ot < 0 || ot >= ow) continue;
                const double gv = gy[oy * ow + ot];
                gw += gv * src[y * wd + t];
                gsrc[y * wd + t] += gv * wt;
              }
            }
            wn.grad[widx] += gw;
          }
        }
      }
    }
  });
  return result;
}

Tensor AvgPoolFreq(const Tensor& x, int factor) {
  RequireRank(x, 3, "avgpool_freq");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  Require(factor >= 1 && h % factor == 0, ErrorCode::kShape,
          "avgpool_freq: frequency extent " + std::to_string(h) +
              " not divisible by " + std::to_string(factor));
  const int oh = h / factor;
  const double inv = 1.0 / factor;
  std::vector<double> out(static_cast<size_t>(c) * oh * w, 0.0);
  const std::vector<double>& xv = x.value();
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < h; ++y) {
      for (int t = 0; t < w; ++t) {
        out[(static_cast<size_t>(ch) * oh + y / factor) * w + t] +=
            inv * xv[(static_cast<size_t>(ch) * h + y) * w + t];
      }
    }
  }
  Tape* tape = x.tape();
  Tensor result = tape->Record({c, oh, w}, std::move(out));
  const int xi = x.id(), ri = result.id();
  tape->SetBackward(result, [=] {
    std::vector<double>& gx = tape->node(xi).grad;
    const std::vector<double>& g = tape->node(ri).grad;
    for (int ch = 0; ch < c; ++ch) {
      for (int y = 0; y < h; ++y) {
        for (int t = 0; t < w; ++t) {
          gx[(static_cast<size_t>(ch) * h + y) * w + t] +=
              inv * g[(static_cast<size_t>(ch) * oh + y / factor) * w + t];
        }
      }
    }
  });
  return result;
}

Tensor UpsampleFreq(const Tensor& x, int factor) {
  RequireRank(x, 3, "upsample_freq");
  Require(factor >= 1, ErrorCode::kShape, "upsample_freq: factor must be >= 1");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  const int oh = h * factor;
  std::vector<double> out(static_cast<size_t>(c) * oh * w);
  const std::vector<double>& xv = x.value();
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < oh; ++y) {
      for (int t = 0; t < w; ++t) {
        out[(static_cast<size_t>(ch) * oh + y) * w + t] =
            xv[(static_cast<size_t>(ch) * h + y / factor) * w + t];
      }
    }
  }
  Tape* tape = x.tape();
  Tensor result = tape->Record({c, oh, w}, std::move(out));
  const int xi = x.id(), ri = result.id();
  tape->SetBackward(result, [=] {
    std::vector<double>& gx = tape->node(xi).grad;
    const std::vector<double>& g = tape->node(ri).grad;
    for (int ch = 0; ch < c; ++ch) {
      for (int y = 0; y < oh; ++y) {
        for (int t = 0; t < w; ++t) {
          gx[(static_cast<size_t>(ch) * h + y / factor) * w + t] +=
              g[(static_cast<size_t>(ch) * oh + y) * w + t];
        }
      }
    }
  });
  return result;
}

Tensor Relu(const Tensor& x) {
  std::vector<double> out = x.value();
  for (double& v : out) v = v > 0.0 ? v : 0.0;
  Tape* tape = x.tape();
  Tensor result = tape->Record(x.shape(), std::move(out));
  const int xi = x.id(), ri = result.id();
  tape->SetBackward(result, [=] {
    Tape::Node& xn = tape->node(xi);
    const std::vector<double>& g = tape->node(ri).grad;
    for (size_t k = 0; k < g.size(); ++k) {
      if (xn.value[k] > 0.0) xn.grad[k] += g[k];
    }
  });
  return result;
}

Tensor Sigmoid(const Tensor& x) {
  std::vector<double> out = x.value();
  // Saturated values are held one ulp inside (0, 1).
  constexpr double kLow = std::numeric_limits<double>::min();
  const double high = std::nextafter(1.0, 0.0);
  for (double& v : out) v = std::clamp(1.0 / (1.0 + std::exp(-v)), kLow, high);
  Tape* tape = x.tape();
  Tensor result = tape->Record(x.shape(), std::move(out));
  const int xi = x.id(), ri = result.id();
  tape->SetBackward(result, [=] {
    Tape::Node& rn = tape->node(ri);
    std::vector<double>& gx = tape->node(xi).grad;
    for (size_t k = 0; k < rn.grad.size(); ++k) {
      const double s = rn.value[k];
      gx[k] += rn.grad[k] * s * (1.0 - s);
    }
  });
  return result;
}

Tensor Mul(const Tensor& a, const Tensor& b) {
  Require(a.shape() == b.shape(), ErrorCode::kShape,
          "mul: shapes " + ShapeString(a.shape()) + " and " +
              ShapeString(b.shape()) + " differ");
  std::vector<double> out(a.size());
  for (size_t k = 0; k < out.size(); ++k) out[k] = a.value()[k] * b.value()[k];
  Tape* tape = a.tape();
  Tensor result = tape->Record(a.shape(), std::move(out));
  const int ai = a.id(), bi = b.id(), ri = result.id();
  tape->SetBackward(result, [=] {
    Tape::Node& an = tape->node(ai);
    Tape::Node& bn = tape->node(bi);
    const std::vector<double>& g = tape->node(ri).grad;
    for (size_t k = 0; k < g.size(); ++k) {
      an.grad[k] += g[k] * bn.value[k];
      bn.grad[k] += g[k] * an.value[k];
    }
  });
  return result;
}

Tensor ConcatChannels(const Tensor& a, const Tensor& b) {
  RequireRank(a, 3, "concat");
  RequireRank(b, 3, "concat");
  Require(a.dim(1) == b.dim(1) && a.dim(2) == b.dim(2), ErrorCode::kShape,
          "concat: spatial shapes " + ShapeString(a.shape()) + " and " +
              ShapeString(b.shape()) + " differ");
  std::vector<double> out = a.value();
  out.insert(out.end(), b.value().begin(), b.value().end());
  Tape* tape = a.tape();
  Tensor result =
      tape->Record({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)}, std::move(out));
  const int ai = a.id(), bi = b.id(), ri = result.id();
  const size_t na = a.size();
  tape->SetBackward(result, [=] {
    std::vector<double>& ga = tape->node(ai).grad;
    std::vector<double>& gb = tape->node(bi).grad;
    const std::vector<double>& g = tape->node(ri).grad;
    for (size_t k = 0; k < na; ++k) ga[k] += g[k];
    for (size_t k = 0; k < gb.size(); ++k) gb[k] += g[na + k];
  });
  return result;
}

Tensor CropPadFreq(const Tensor& x, int target, PadMode mode) {
  RequireRank(x, 3, "crop_pad_freq");
  Require(target > 0, ErrorCode::kShape, "crop_pad_freq: target must be > 0");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  // Source row for each output row, or -1 for a zero row.
  std::vector<int> source(target);
  for (int y = 0; y < target; ++y) {
    source[y] = y < h ? y : (mode == PadMode::kEdge ? h - 1 : -1);
  }
  std::vector<double> out(static_cast<size_t>(c) * target * w, 0.0);
  const std::vector<double>& xv = x.value();
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < target; ++y) {
      if (source[y] < 0) continue;
      for (int t = 0; t < w; ++t) {
        out[(static_cast<size_t>(ch) * target + y) * w + t] =
            xv[(static_cast<size_t>(ch) * h + source[y]) * w + t];
      }
    }
  }
  Tape* tape = x.tape();
  Tensor result = tape->Record({c, target, w}, std::move(out));
  const int xi = x.id(), ri = result.id();
  tape->SetBackward(result, [=] {
    std::vector<double>& gx = tape->node(xi).grad;
    const std::vector<double>& g = tape->node(ri).grad;
    for (int ch = 0; ch < c; ++ch) {
      for (int y = 0; y < target; ++y) {
        if (source[y] < 0) continue;
        for (int t = 0; t < w; ++t) {
          gx[(static_cast<size_t>(ch) * h + source[y]) * w + t] +=
              g[(static_cast<size_t>(ch) * target + y) * w + t];
        }
      }
    }
  });
  return result;
}

Tensor ReflectPadTime(const Tensor& x, int target) {
  RequireRank(x, 3, "reflect_pad_time");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  Require(target >= w, ErrorCode::kShape,
          "reflect_pad_time: target shorter than input");
  std::vector<int> source(target);
  for (int t = 0; t < target; ++t) source[t] = ReflectIndex(t, w);
  std::vector<double> out(static_cast<size_t>(c) * h * target);
  const std::vector<double>& xv = x.value();
  for (int row = 0; row < c * h; ++row) {
    for (int t = 0; t < target; ++t) {
      out[static_cast<size_t>(row) * target + t] =
          xv[static_cast<size_t>(row) * w + source[t]];
    }
  }
  Tape* tape = x.tape();
  Tensor result = tape->Record({c, h, target}, std::move(out));
  const int xi = x.id(), ri = result.id();
  tape->SetBackward(result, [=] {
    std::vector<double>& gx = tape->node(xi).grad;
    const std::vector<double>& g = tape->node(ri).grad;
    for (int row = 0; row < c * h; ++row) {
      for (int t = 0; t < target; ++t) {
        gx[static_cast<size_t>(row) * w + source[t]] +=
            g[static_cast<size_t>(row) * target + t];
      }
    }
  });
  return result;
}

Tensor CropTime(const Tensor& x, int target) {
  RequireRank(x, 3, "crop_time");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  Require(target >= 1 && target <= w, ErrorCode::kShape,
          "crop_time: target outside [1, " + std::to_string(w) + "]");
  std::vector<double> out(static_cast<size_t>(c) * h * target);
  const std::vector<double>& xv = x.value();
  for (int row = 0; row < c * h; ++row) {
    std::copy_n(&xv[static_cast<size_t>(row) * w], target,
                &out[static_cast<size_t>(row) * target]);
  }
  Tape* tape = x.tape();
  Tensor result = tape->Record({c, h, target}, std::move(out));
  const int xi = x.id(), ri = result.id();
  tape->SetBackward(result, [=] {
    std::vector<double>& gx = tape->node(xi).grad;
    const std::vector<double>& g = tape->node(ri).grad;
    for (int row = 0; row < c * h; ++row) {
      for (int t = 0; t < target; ++t) {
        gx[static_cast<size_t>(row) * w + t] +=
            g[static_cast<size_t>(row) * target + t];
      }
    }
  });
  return result;
}

}  // namespace ccstoi::nn
