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

#include "hsc/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "hsc/error.hpp"

namespace hsc::nn {

namespace {

// Row ranges of a 3x3 tap (dy, dx) that stay inside an h x w plane.
struct TapRange {
    int i0, i1, j0, j1;
};

TapRange tap_range(int dy, int dx, int h, int w) {
    return {std::max(0, -dy), std::min(h, h - dy), std::max(0, -dx), std::min(w, w - dx)};
}

template <typename T>
T dot(const T* a, const T* b, int n) {
    T s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    int j = 0;
    for (; j + 4 <= n; j += 4) {
        s0 += a[j] * b[j];
        s1 += a[j + 1] * b[j + 1];
        s2 += a[j + 2] * b[j + 2];
        s3 += a[j + 3] * b[j + 3];
    }
    for (; j < n; ++j) s0 += a[j] * b[j];
    return (s0 + s1) + (s2 + s3);
}

}  // namespace

template <typename T>
Tensor4<T> conv2d_forward(const Tensor4<T>& x, const Conv2d<T>& layer) {
    require(x.c == layer.in_channels, ErrorCode::ShapeMismatch,
            "conv expects " + std::to_string(layer.in_channels) + " input channels, got " + std::to_string(x.c));
    const int h = x.h, w = x.w;
    Tensor4<T> y(x.n, layer.out_channels, h, w);
    for (int n = 0; n < x.n; ++n) {
        for (int o = 0; o < layer.out_channels; ++o) {
            T* yo = y.channel(n, o);
            std::fill(yo, yo + y.plane(), layer.bias[o]);
            for (int c = 0; c < layer.in_channels; ++c) {
                const T* xc = x.channel(n, c);
                const T* k = &layer.weight[layer.weight_index(o, c, 0, 0)];
                for (int ky = 0; ky < 3; ++ky) {
                    for (int kx = 0; kx < 3; ++kx) {
                        const int dy = ky - 1, dx = kx - 1;
                        const TapRange r = tap_range(dy, dx, h, w);
                        const T wv = k[ky * 3 + kx];
                        for (int i = r.i0; i < r.i1; ++i) {
                            T* yr = yo + static_cast<size_t>(i) * w;
                            const T* xr = xc + static_cast<ptrdiff_t>(i + dy) * w + dx;
                            for (int j = r.j0; j < r.j1; ++j) yr[j] += wv * xr[j];
                        }
                    }
                }
            }
        }
    }
    return y;
}

template <typename T>
ConvGradients<T> conv2d_backward(const Tensor4<T>& x, const Conv2d<T>& layer, const Tensor4<T>& grad_y,
                                 bool need_grad_x) {
    require(x.c == layer.in_channels && grad_y.c == layer.out_channels && grad_y.n == x.n && grad_y.h == x.h &&
                grad_y.w == x.w,
            ErrorCode::ShapeMismatch, "conv backward shapes are inconsistent");
    const int h = x.h, w = x.w;
    ConvGradients<T> g;
    g.grad_w.assign(layer.weight.size(), T(0));
    g.grad_b.assign(layer.bias.size(), T(0));
    if (need_grad_x) g.grad_x = Tensor4<T>(x.n, x.c, h, w);

    for (int n = 0; n < x.n; ++n) {
        for (int o = 0; o < layer.out_channels; ++o) {
            const T* go = grad_y.channel(n, o);
            T bsum = 0;
            for (size_t i = 0; i < grad_y.plane(); ++i) bsum += go[i];
            g.grad_b[o] += bsum;

            for (int c = 0; c < layer.in_channels; ++c) {
                const T* xc = x.channel(n, c);
                for (int ky = 0; ky < 3; ++ky) {
                    for (int kx = 0; kx < 3; ++kx) {
                        const int dy = ky - 1, dx = kx - 1;
                        const TapRange r = tap_range(dy, dx, h, w);
                        T acc = 0;
                        for (int i = r.i0; i < r.i1; ++i) {
                            const T* gr = go + static_cast<size_t>(i) * w + r.j0;
                            const T* xr = xc + static_cast<ptrdiff_t>(i + dy) * w + dx + r.j0;
                            acc += dot(gr, xr, r.j1 - r.j0);
                        }
                        g.grad_w[layer.weight_index(o, c, ky, kx)] += acc;
                    }
                }
            }
        }
        if (!need_grad_x) continue;
        for (int c = 0; c < layer.in_channels; ++c) {
            T* gxc = g.grad_x.channel(n, c);
            for (int o = 0; o < layer.out_channels; ++o) {
                const T* go = grad_y.channel(n, o);
                const T* k = &layer.weight[layer.weight_index(o, c, 0, 0)];
                for (int ky = 0; ky < 3; ++ky) {
                    for (int kx = 0; kx < 3; ++kx) {
                        const int dy = ky - 1, dx = kx - 1;
                        const TapRange r = tap_range(dy, dx, h, w);
                        const T wv = k[ky * 3 + kx];
                        for (int i = r.i0; i < r.i1; ++i) {
                            T* gr = gxc + static_cast<ptrdiff_t>(i + dy) * w + dx;
                            const T* gyr = go + static_cast<size_t>(i) * w;
                            for (int j = r.j0; j < r.j1; ++j) gr[j] += wv * gyr[j];
                        }
                    }
                }
            }
        }
    }
    return g;
}

template <typename T>
void relu_inplace(Tensor4<T>& x) {
    for (T& v : x.data) v = v > T(0) ? v : T(0);
}

template <typename T>
Tensor4<T> relu_backward(const Tensor4<T>& x, const Tensor4<T>& grad_y) {
    require(x.same_shape(grad_y), ErrorCode::ShapeMismatch, "relu backward shapes differ");
    Tensor4<T> g = grad_y;
    for (size_t i = 0; i < g.data.size(); ++i)
        if (!(x.data[i] > T(0))) g.data[i] = T(0);
    return g;
}

template <typename T>
LossResult<T> l1_loss(const Tensor4<T>& pred, const Tensor4<T>& target) {
    require(pred.same_shape(target), ErrorCode::ShapeMismatch, "l1 loss shapes differ");
    LossResult<T> r;
    r.grad = Tensor4<T>(pred.n, pred.c, pred.h, pred.w);
    const double count = static_cast<double>(pred.size());
    const T scale = static_cast<T>(1.0 / count);
    double sum = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const T d = pred.data[i] - target.data[i];
        sum += std::abs(static_cast<double>(d));
        r.grad.data[i] = d > T(0) ? scale : (d < T(0) ? -scale : T(0));
    }
    r.value = sum / count;
    return r;
}

template <typename T>
LossResult<T> l2_loss(const Tensor4<T>& pred, const Tensor4<T>& target) {
    require(pred.same_shape(target), ErrorCode::ShapeMismatch, "l2 loss shapes differ");
    LossResult<T> r;
    r.grad = Tensor4<T>(pred.n, pred.c, pred.h, pred.w);
    const double count = static_cast<double>(pred.size());
    const T scale = static_cast<T>(2.0 / count);
    double sum = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const T d = pred.data[i] - target.data[i];
        sum += static_cast<double>(d) * d;
        r.grad.data[i] = scale * d;
    }
    r.value = sum / count;
    return r;
}

#define HSC_INSTANTIATE(T)                                                                                 \
    template Tensor4<T> conv2d_forward(const Tensor4<T>&, const Conv2d<T>&);                               \
    template ConvGradients<T> conv2d_backward(const Tensor4<T>&, const Conv2d<T>&, const Tensor4<T>&, bool); \
    template void relu_inplace(Tensor4<T>&);                                                               \
    template Tensor4<T> relu_backward(const Tensor4<T>&, const Tensor4<T>&);                               \
    template LossResult<T> l1_loss(const Tensor4<T>&, const Tensor4<T>&);                                  \
    template LossResult<T> l2_loss(const Tensor4<T>&, const Tensor4<T>&);

HSC_INSTANTIATE(float)
HSC_INSTANTIATE(double)
#undef HSC_INSTANTIATE

}  // namespace hsc::nn
