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

#ifndef CCSTOI_SPECTRAL_FFT_H_
#define CCSTOI_SPECTRAL_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace ccstoi {

// Iterative radix-2 FFT for power-of-two sizes. Twiddles and the bit-reversal
// permutation are computed once and never mutated, so a const Fft may be
// shared between threads.
class Fft {
 public:
  explicit Fft(size_t size);

  size_t size() const { return size_; }

  // In-place forward transform (negative exponent, no scaling).
  void Forward(std::span<std::complex<double>> data) const;
  // In-place inverse transform, scaled by 1/size.
  void Inverse(std::span<std::complex<double>> data) const;

 private:
  void Transform(std::span<std::complex<double>> data, bool inverse) const;

  size_t size_;
  std::vector<std::complex<double>> twiddles_;
  std::vector<size_t> bit_reverse_;
};

bool IsPowerOfTwo(size_t n);

}  // namespace ccstoi

#endif  // CCSTOI_SPECTRAL_FFT_H_
