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

#include "spectral/fft.h"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "common/error.h"

namespace ccstoi {

bool IsPowerOfTwo(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Fft::Fft(size_t size) : size_(size) {
  Require(IsPowerOfTwo(size), ErrorCode::kConfig,
          "FFT length must be a power of two, got " + std::to_string(size));
  twiddles_.resize(size / 2);
  for (size_t k = 0; k < size / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * k / size;
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
  bit_reverse_.resize(size);
  size_t bits = 0;
  while ((size_t{1} << bits) < size) ++bits;
  for (size_t i = 0; i < size; ++i) {
    size_t r = 0;
    for (size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
}

void Fft::Forward(std::span<std::complex<double>> data) const {
  Transform(data, false);
}

void Fft::Inverse(std::span<std::complex<double>> data) const {
  Transform(data, true);
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& v : data) v *= scale;
}

void Fft::Transform(std::span<std::complex<double>> data, bool inverse) const {
  Require(data.size() == size_, ErrorCode::kShape, "FFT buffer size mismatch");
  for (size_t i = 0; i < size_; ++i) {
    if (i < bit_reverse_[i]) std::swap(data[i], data[bit_reverse_[i]]);
  }
  for (size_t len = 2; len <= size_; len <<= 1) {
    const size_t half = len / 2;
    const size_t step = size_ / len;
    for (size_t start = 0; start < size_; start += len) {
      for (size_t k = 0; k < half; ++k) {
        std::complex<double> w = twiddles_[k * step];
        if (inverse) w = std::conj(w);
        const std::complex<double> odd = w * data[start + k + half];
        data[start + k + half] = data[start + k] - odd;
        data[start + k] += odd;
      }
    }
  }
}

}  // namespace ccstoi
