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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsc/nn/layers.hpp"
#include "hsc/nn/tensor.hpp"

namespace hsc::nn {

enum class ArchKind : uint32_t { MiniIsp = 0, TinyDenoiser = 1 };

const char* to_string(ArchKind kind);

/// Plain stack of 3x3 convolutions with ReLU between them (none after the
/// last), optionally wrapped in a global residual connection.
struct Architecture {
    ArchKind kind = ArchKind::MiniIsp;
    std::vector<int> channels;  // channels[0] in, channels.back() out
    bool residual = false;

    int layer_count() const { return static_cast<int>(channels.size()) - 1; }
    bool operator==(const Architecture&) const = default;
    std::string describe() const;
};

/// 5 layers, 3 -> width x4 -> 3. The reference width is 128.
Architecture mini_isp_architecture(int width = 128);

/// depth layers on packed 4-channel Bayer input, output = input + net(input).
Architecture tiny_denoiser_architecture(int depth = 6, int width = 32);

template <typename T>
class ConvNet {
public:
    struct Cache {
        std::vector<Tensor4<T>> activations;  // input, then each layer output
    };

    ConvNet() = default;
    explicit ConvNet(Architecture arch);

    /// Kaiming-uniform fan-in weights, zero biases. Residual nets start with a
    /// zero last layer so they begin as the identity map.
    void initialize(uint64_t seed);

    Tensor4<T> forward(const Tensor4<T>& x, Cache* cache = nullptr) const;

    /// Parameter gradients for d(loss)/d(output) = grad_out, in parameters() order.
    std::vector<std::vector<T>> backward(const Cache& cache, const Tensor4<T>& grad_out) const;

    /// weight0, bias0, weight1, bias1, ...
    std::vector<std::span<T>> parameters();
    std::vector<std::span<const T>> parameters() const;

    const Architecture& architecture() const { return arch_; }
    std::vector<Conv2d<T>>& layers() { return layers_; }
    const std::vector<Conv2d<T>>& layers() const { return layers_; }

    template <typename U>
    ConvNet<U> cast() const;

private:
    Architecture arch_;
    std::vector<Conv2d<T>> layers_;
};

template <typename T>
template <typename U>
ConvNet<U> ConvNet<T>::cast() const {
    ConvNet<U> out(arch_);
    for (size_t l = 0; l < layers_.size(); ++l) {
        auto& dst = out.layers()[l];
        for (size_t i = 0; i < dst.weight.size(); ++i) dst.weight[i] = static_cast<U>(layers_[l].weight[i]);
        for (size_t i = 0; i < dst.bias.size(); ++i) dst.bias[i] = static_cast<U>(layers_[l].bias[i]);
    }
    return out;
}

}  // namespace hsc::nn
