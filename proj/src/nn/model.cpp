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

#include "hsc/nn/model.hpp"

#include <cmath>

#include "hsc/error.hpp"
#include "hsc/rng.hpp"

namespace hsc::nn {

const char* to_string(ArchKind kind) {
    switch (kind) {
        case ArchKind::MiniIsp: return "mini_isp";
        case ArchKind::TinyDenoiser: return "tiny_denoiser";
    }
    return "unknown";
}

std::string Architecture::describe() const {
    std::string s = std::string(to_string(kind)) + "[";
    for (size_t i = 0; i < channels.size(); ++i) s += (i ? "-" : "") + std::to_string(channels[i]);
    return s + (residual ? "]+res" : "]");
}

Architecture mini_isp_architecture(int width) {
    require(width >= 1, ErrorCode::InvariantViolation, "Mini-ISP width must be positive");
    return {ArchKind::MiniIsp, {3, width, width, width, width, 3}, false};
}

Architecture tiny_denoiser_architecture(int depth, int width) {
    require(depth >= 2 && width >= 1, ErrorCode::InvariantViolation, "denoiser needs depth >= 2 and width >= 1");
    std::vector<int> ch{4};
    for (int i = 0; i < depth - 1; ++i) ch.push_back(width);
    ch.push_back(4);
    return {ArchKind::TinyDenoiser, ch, true};
}

template <typename T>
ConvNet<T>::ConvNet(Architecture arch) : arch_(std::move(arch)) {
    require(arch_.layer_count() >= 1, ErrorCode::InvariantViolation, "network needs at least one layer");
    if (arch_.residual)
        require(arch_.channels.front() == arch_.channels.back(), ErrorCode::InvariantViolation,
                "residual network must map C channels to C channels");
    for (int l = 0; l < arch_.layer_count(); ++l) layers_.emplace_back(arch_.channels[l], arch_.channels[l + 1]);
}

template <typename T>
void ConvNet<T>::initialize(uint64_t seed) {
    const int last = arch_.layer_count() - 1;
    for (int l = 0; l <= last; ++l) {
        Conv2d<T>& layer = layers_[l];
        std::fill(layer.bias.begin(), layer.bias.end(), T(0));
        if (arch_.residual && l == last) {
            std::fill(layer.weight.begin(), layer.weight.end(), T(0));
            continue;
        }
        Rng rng(Rng::derive(seed, static_cast<uint64_t>(l)));
        const double fan_in = 9.0 * layer.in_channels;
        // ReLU gain sqrt(2) on hidden layers, linear gain on the output layer.
        const double gain = l == last ? 1.0 : std::sqrt(2.0);
        const double bound = gain * std::sqrt(3.0 / fan_in);
        for (T& w : layer.weight) w = static_cast<T>(rng.uniform(-bound, bound));
    }
}

template <typename T>
Tensor4<T> ConvNet<T>::forward(const Tensor4<T>& x, Cache* cache) const {
    require(x.c == arch_.channels.front(), ErrorCode::ShapeMismatch,
            "network expects " + std::to_string(arch_.channels.front()) + " channels, got " + std::to_string(x.c));
    if (cache) {
        cache->activations.clear();
        cache->activations.push_back(x);
    }
    Tensor4<T> h = x;
    const int last = arch_.layer_count() - 1;
    for (int l = 0; l <= last; ++l) {
        h = conv2d_forward(h, layers_[l]);
        if (l != last) relu_inplace(h);
        if (cache) cache->activations.push_back(h);
    }
    if (arch_.residual)
        for (size_t i = 0; i < h.data.size(); ++i) h.data[i] += x.data[i];
    return h;
}

template <typename T>
std::vector<std::vector<T>> ConvNet<T>::backward(const Cache& cache, const Tensor4<T>& grad_out) const {
    const int count = arch_.layer_count();
    require(static_cast<int>(cache.activations.size()) == count + 1, ErrorCode::ShapeMismatch,
            "forward cache does not match the network");
    std::vector<std::vector<T>> grads(2 * static_cast<size_t>(count));
    Tensor4<T> g = grad_out;
    for (int l = count - 1; l >= 0; --l) {
        if (l != count - 1) g = relu_backward(cache.activations[l + 1], g);
        ConvGradients<T> cg = conv2d_backward(cache.activations[l], layers_[l], g, l > 0);
        grads[2 * l] = std::move(cg.grad_w);
        grads[2 * l + 1] = std::move(cg.grad_b);
        g = std::move(cg.grad_x);
    }
    return grads;
}

template <typename T>
std::vector<std::span<T>> ConvNet<T>::parameters() {
    std::vector<std::span<T>> p;
    for (Conv2d<T>& l : layers_) {
        p.emplace_back(l.weight);
        p.emplace_back(l.bias);
    }
    return p;
}

template <typename T>
std::vector<std::span<const T>> ConvNet<T>::parameters() const {
    std::vector<std::span<const T>> p;
    for (const Conv2d<T>& l : layers_) {
        p.emplace_back(l.weight);
        p.emplace_back(l.bias);
    }
    return p;
}

template class ConvNet<float>;
template class ConvNet<double>;

}  // namespace hsc::nn
