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

#include "nn/checkpoint.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "common/error.h"

namespace ccstoi::nn {
namespace {

constexpr char kMagic[] = "IMSK1";
constexpr size_t kMagicLen = 5;

class Writer {
 public:
  void Bytes(const void* data, size_t n) {
    const auto* p = static_cast<const char*>(data);
    out_.append(p, n);
  }
  void U32(uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void String(const std::string& s) {
    U32(static_cast<uint32_t>(s.size()));
    out_ += s;
  }
  void Floats(const double* data, size_t n) {
    for (size_t i = 0; i < n; ++i) {
      const float f = static_cast<float>(data[i]);
      uint32_t bits;
      std::memcpy(&bits, &f, sizeof bits);
      U32(bits);
    }
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& data) : data_(data) {}

  const char* Bytes(size_t n) {
    Require(pos_ + n <= data_.size(), ErrorCode::kFormat,
            "checkpoint is truncated");
    const char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }
  uint32_t U32() {
    const auto* p = reinterpret_cast<const unsigned char*>(Bytes(4));
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) |
           (static_cast<uint32_t>(p[3]) << 24);
  }
  uint64_t U64() {
    const uint64_t lo = U32();
    const uint64_t hi = U32();
    return lo | (hi << 32);
  }
  std::string String() {
    const uint32_t n = U32();
    return std::string(Bytes(n), n);
  }
  void Floats(double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) {
      const uint32_t bits = U32();
      float f;
      std::memcpy(&f, &bits, sizeof f);
      out[i] = f;
    }
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  const std::string& data_;
  size_t pos_ = 0;
};

}  // namespace

std::string Checkpoint::ConfigText() const {
  KeyValueConfig all = metadata;
  all.Merge(net.ToConfig());
  return all.Serialize();
}

std::string Checkpoint::ConfigHash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(Fnv1a64(ConfigText())));
  return buf;
}

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  const std::vector<ParameterInfo> layout = MaskNet::Layout(ckpt.net);
  const size_t total = layout.back().offset + layout.back().size;
  Require(ckpt.parameters.size() == total, ErrorCode::kShape,
          "checkpoint parameters do not match the network layout");
  Require(ckpt.optimizer.m.size() == ckpt.optimizer.v.size() &&
              (ckpt.optimizer.m.empty() || ckpt.optimizer.m.size() == total),
          ErrorCode::kShape, "optimizer moments do not match the parameters");

  Writer w;
  w.Bytes(kMagic, kMagicLen);
  w.String(ckpt.ConfigText());
  w.U32(static_cast<uint32_t>(layout.size()));
  for (const ParameterInfo& p : layout) {
    w.String(p.name);
    w.U32(static_cast<uint32_t>(p.size));
    w.Floats(ckpt.parameters.data() + p.offset, p.size);
  }
  w.U64(ckpt.optimizer.step);
  w.U32(static_cast<uint32_t>(ckpt.optimizer.m.size()));
  w.Floats(ckpt.optimizer.m.data(), ckpt.optimizer.m.size());
  w.Floats(ckpt.optimizer.v.data(), ckpt.optimizer.v.size());
  w.U32(static_cast<uint32_t>(ckpt.epoch));
  w.String(ckpt.rng_state);
  return w.Take();
}

Checkpoint ParseCheckpoint(const std::string& bytes) {
  Reader r(bytes);
  Require(bytes.size() >= kMagicLen &&
              std::memcmp(r.Bytes(kMagicLen), kMagic, kMagicLen) == 0,
          ErrorCode::kFormat, "not a mask-network checkpoint (bad magic)");
  Checkpoint ckpt;
  KeyValueConfig config = KeyValueConfig::Parse(r.String());
  ckpt.net = MaskNetConfig::FromConfig(config);
  for (const auto& [key, value] : config.entries()) {
    if (key.rfind("net.", 0) != 0) ckpt.metadata.Set(key, value);
  }

  const std::vector<ParameterInfo> layout = MaskNet::Layout(ckpt.net);
  const uint32_t segments = r.U32();
  Require(segments == layout.size(), ErrorCode::kFormat,
          "checkpoint has " + std::to_string(segments) +
              " parameter segments, config implies " +
              std::to_string(layout.size()));
  ckpt.parameters.assign(layout.back().offset + layout.back().size, 0.0);
  for (const ParameterInfo& p : layout) {
    const std::string name = r.String();
    const uint32_t count = r.U32();
    Require(name == p.name && count == p.size, ErrorCode::kFormat,
            "checkpoint segment '" + name + "' does not match expected '" +
                p.name + "'");
    r.Floats(ckpt.parameters.data() + p.offset, p.size);
  }
  ckpt.optimizer.step = r.U64();
  const uint32_t moments = r.U32();
  Require(moments == 0 || moments == ckpt.parameters.size(), ErrorCode::kFormat,
          "optimizer moment count does not match the parameters");
  ckpt.optimizer.m.resize(moments);
  ckpt.optimizer.v.resize(moments);
  r.Floats(ckpt.optimizer.m.data(), moments);
  r.Floats(ckpt.optimizer.v.data(), moments);
  ckpt.epoch = static_cast<int>(r.U32());
  ckpt.rng_state = r.String();
  Require(r.done(), ErrorCode::kFormat, "trailing bytes after checkpoint");
  return ckpt;
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  const std::string bytes = SerializeCheckpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open checkpoint " + path);
  std::ostringstream data;
  data << in.rdbuf();
  return ParseCheckpoint(data.str());
}

}  // namespace ccstoi::nn
