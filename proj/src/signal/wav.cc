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

#include "signal/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "common/error.h"

namespace ccstoi {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<uint8_t>* out, uint16_t v) {
  out->push_back(static_cast<uint8_t>(v & 0xFF));
  out->push_back(static_cast<uint8_t>(v >> 8));
}

void PutU32(std::vector<uint8_t>* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void PutTag(std::vector<uint8_t>* out, const char* tag) {
  out->insert(out->end(), tag, tag + 4);
}

}  // namespace

Waveform ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  const std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    Fail(ErrorCode::kFormat, path + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const uint8_t* data = nullptr;
  size_t data_size = 0;
  bool have_data = false;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    const uint32_t size = ReadU32(chunk + 4);
    const size_t body = pos + 8;
    const size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) {
        Fail(ErrorCode::kFormat, path + ": truncated fmt chunk");
      }
      const uint8_t* f = bytes.data() + body;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      rate = ReadU32(f + 4);
      bits = ReadU16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 26) Fail(ErrorCode::kFormat, path + ": short extensible fmt");
        format = ReadU16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      // Some writers leave 0xFFFFFFFF or an oversized length for streams.
      data_size = std::min<size_t>(size, avail);
      have_data = true;
    }
    pos = body + size + (size & 1);
  }

  if (!have_fmt) Fail(ErrorCode::kFormat, path + ": missing fmt chunk");
  if (!have_data) Fail(ErrorCode::kFormat, path + ": missing data chunk");
  if (channels == 0 || rate == 0) {
    Fail(ErrorCode::kFormat, path + ": invalid channel count or sample rate");
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    Fail(ErrorCode::kUnsupportedFormat,
         path + ": only 16-bit PCM and 32-bit float are supported (format " +
             std::to_string(format) + ", " + std::to_string(bits) + " bits)");
  }

  const size_t sample_bytes = bits / 8;
  const size_t frame_bytes = sample_bytes * channels;
  const size_t frames = data_size / frame_bytes;
  if (frames == 0) Fail(ErrorCode::kFormat, path + ": empty data chunk");

  Waveform wave;
  wave.sample_rate = static_cast<int>(rate);
  wave.samples.resize(frames);
  for (size_t n = 0; n < frames; ++n) {
    double acc = 0.0;
    for (size_t c = 0; c < channels; ++c) {
      const uint8_t* p = data + n * frame_bytes + c * sample_bytes;
      if (pcm16) {
        acc += static_cast<int16_t>(ReadU16(p)) / 32768.0;
      } else {
        const uint32_t raw = ReadU32(p);
        float v;
        std::memcpy(&v, &raw, sizeof v);
        acc += v;
      }
    }
    wave.samples[n] = acc / channels;
  }
  return wave;
}

void WriteWav(const Waveform& wave, const std::string& path) {
  Require(wave.sample_rate > 0, ErrorCode::kInvalidArgument,
          "sample rate must be positive");
  for (double s : wave.samples) {
    Require(std::isfinite(s), ErrorCode::kInvalidArgument,
            "cannot write non-finite samples to " + path);
  }
  const uint32_t data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(&out, "RIFF");
  PutU32(&out, 36 + data_bytes);
  PutTag(&out, "WAVE");
  PutTag(&out, "fmt ");
  PutU32(&out, 16);
  PutU16(&out, kFormatPcm);
  PutU16(&out, 1);
  PutU32(&out, static_cast<uint32_t>(wave.sample_rate));
  PutU32(&out, static_cast<uint32_t>(wave.sample_rate) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  PutTag(&out, "data");
  PutU32(&out, data_bytes);
  for (double s : wave.samples) {
    const double q = std::clamp(std::nearbyint(s * 32768.0), -32768.0, 32767.0);
    PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) Fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) Fail(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace ccstoi
