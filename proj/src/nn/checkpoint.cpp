// Copyright (c) 2026 The hsc-toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hsc/nn/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "hsc/error.hpp"
#include "hsc/io.hpp"

namespace hsc::nn {

namespace {

class Writer {
public:
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
    void f32s(std::span<const float> v) {
        for (float x : v) u32(std::bit_cast<uint32_t>(x));
    }
    void bytes(const void* p, size_t n) {
        const auto* b = static_cast<const uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    std::vector<uint8_t> take() { return std::move(out_); }

private:
    std::vector<uint8_t> out_;
};

class Reader {
public:
    explicit Reader(const std::vector<uint8_t>& in) : in_(in) {}

    void need(size_t n) const {
        require(in_.size() - pos_ >= n, ErrorCode::MalformedCheckpoint, "checkpoint truncated");
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | in_[pos_ + i];
        pos_ += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | in_[pos_ + i];
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    void f32s(std::span<float> out) {
        need(4 * out.size());
        for (float& x : out) x = std::bit_cast<float>(u32());
    }
    const uint8_t* take(size_t n) {
        need(n);
        const uint8_t* p = in_.data() + pos_;
        pos_ += n;
        return p;
    }
    bool done() const { return pos_ == in_.size(); }

private:
    const std::vector<uint8_t>& in_;
    size_t pos_ = 0;
};

}  // namespace

std::vector<uint8_t> encode_checkpoint(const ConvNet<float>& model, const AdamState<float>* optimizer,
                                       const nlohmann::json& manifest) {
    const Architecture& arch = model.architecture();
    Writer w;
    w.bytes("HSNN", 4);
    w.u32(kCheckpointVersion);
    w.u32(static_cast<uint32_t>(arch.kind));
    w.u32(arch.residual ? 1 : 0);
    w.u32(static_cast<uint32_t>(arch.layer_count()));
    for (int c : arch.channels) w.u32(static_cast<uint32_t>(c));
    for (const auto& p : model.parameters()) w.f32s(p);

    w.u32(optimizer ? 1 : 0);
    if (optimizer) {
        w.u64(static_cast<uint64_t>(optimizer->t));
        w.f64(optimizer->beta1);
        w.f64(optimizer->beta2);
        w.f64(optimizer->eps);
        const auto params = model.parameters();
        require(optimizer->m.empty() || optimizer->m.size() == params.size(), ErrorCode::ShapeMismatch,
                "optimizer state does not match the model");
        for (size_t k = 0; k < params.size(); ++k) {
            if (optimizer->m.empty()) {
                const std::vector<float> zeros(params[k].size(), 0.0f);
                w.f32s(zeros);
                w.f32s(zeros);
            } else {
                w.f32s(optimizer->m[k]);
                w.f32s(optimizer->v[k]);
            }
        }
    }
    const std::string text = manifest.dump();
    w.u64(text.size());
    w.bytes(text.data(), text.size());
    return w.take();
}

Checkpoint decode_checkpoint(const std::vector<uint8_t>& bytes) {
    Reader r(bytes);
    require(std::memcmp(r.take(4), "HSNN", 4) == 0, ErrorCode::MalformedCheckpoint, "bad checkpoint magic");
    const uint32_t version = r.u32();
    require(version == kCheckpointVersion, ErrorCode::MalformedCheckpoint,
            "unsupported checkpoint version " + std::to_string(version));
    Architecture arch;
    const uint32_t kind = r.u32();
    require(kind <= 1, ErrorCode::MalformedCheckpoint, "unknown architecture kind");
    arch.kind = static_cast<ArchKind>(kind);
    arch.residual = r.u32() != 0;
    const uint32_t layers = r.u32();
    require(layers >= 1 && layers <= 1024, ErrorCode::MalformedCheckpoint, "implausible layer count");
    for (uint32_t i = 0; i <= layers; ++i) {
        const uint32_t c = r.u32();
        require(c >= 1 && c <= 65536, ErrorCode::MalformedCheckpoint, "implausible channel width");
        arch.channels.push_back(static_cast<int>(c));
    }

    Checkpoint ckpt;
    try {
        ckpt.model = ConvNet<float>(arch);
    } catch (const Error& e) {
        fail(ErrorCode::MalformedCheckpoint, e.what());
    }
    for (auto& p : ckpt.model.parameters()) r.f32s(p);

    if (r.u32() != 0) {
        AdamState<float> s;
        s.t = static_cast<int64_t>(r.u64());
        s.beta1 = r.f64();
        s.beta2 = r.f64();
        s.eps = r.f64();
        for (const auto& p : ckpt.model.parameters()) {
            s.m.emplace_back(p.size());
            s.v.emplace_back(p.size());
            r.f32s(s.m.back());
            r.f32s(s.v.back());
        }
        ckpt.optimizer = std::move(s);
    }
    const uint64_t len = r.u64();
    const auto* text = reinterpret_cast<const char*>(r.take(len));
    try {
        ckpt.manifest = nlohmann::json::parse(text, text + len);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::MalformedCheckpoint, std::string("bad manifest: ") + e.what());
    }
    require(r.done(), ErrorCode::MalformedCheckpoint, "trailing bytes after checkpoint manifest");
    return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const ConvNet<float>& model,
                     const AdamState<float>* optimizer, const nlohmann::json& manifest) {
    const auto bytes = encode_checkpoint(model, optimizer, manifest);
    write_file(path, bytes.data(), bytes.size());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_file(path)); }

void load_weights(ConvNet<float>& model, const Checkpoint& checkpoint) {
    require(model.architecture() == checkpoint.model.architecture(), ErrorCode::ArchMismatch,
            "checkpoint is " + checkpoint.model.architecture().describe() + ", model is " +
                model.architecture().describe());
    model = checkpoint.model;
}

}  // namespace hsc::nn
