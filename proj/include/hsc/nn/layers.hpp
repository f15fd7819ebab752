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

#include <vector>

#include "hsc/nn/tensor.hpp"

namespace hsc::nn {

/// 3x3 convolution, stride 1, zero padding 1. Weights are (out, in, 3, 3).
template <typename T>
struct Conv2d {
    int in_channels = 0;
    int out_channels = 0;
    std::vector<T> weight;
    std::vector<T> bias;

    Conv2d() = default;
    Conv2d(int in, int out)
        : in_channels(in), out_channels(out), weight(static_cast<size_t>(out) * in * 9, T(0)), bias(out, T(0)) {}

    size_t weight_index(int o, int c, int ky, int kx) const {
        return ((static_cast<size_t>(o) * in_channels + c) * 3 + ky) * 3 + kx;
    }
};

template <typename T>
struct ConvGradients {
    Tensor4<T> grad_x;  // empty when not requested
    std::vector<T> grad_w;
    std::vector<T> grad_b;
};

/// y = bias + sum over (c, ky, kx) in that order, so results match a plain
/// nested-loop reference bit for bit.
template <typename T>
Tensor4<T> conv2d_forward(const Tensor4<T>& x, const Conv2d<T>& layer);

template <typename T>
ConvGradients<T> conv2d_backward(const Tensor4<T>& x, const Conv2d<T>& layer, const Tensor4<T>& grad_y,
                                 bool need_grad_x = true);

template <typename T>
void relu_inplace(Tensor4<T>& x);

/// Gradient passes where the forward input (or output) was > 0.
template <typename T>
Tensor4<T> relu_backward(const Tensor4<T>& x, const Tensor4<T>& grad_y);

template <typename T>
struct LossResult {
    double value = 0.0;
    Tensor4<T> grad;
};

/// mean |p - t|, with sign(0) = 0.
template <typename T>
LossResult<T> l1_loss(const Tensor4<T>& pred, const Tensor4<T>& target);

/// mean (p - t)^2.
template <typename T>
LossResult<T> l2_loss(const Tensor4<T>& pred, const Tensor4<T>& target);

}  // namespace hsc::nn
