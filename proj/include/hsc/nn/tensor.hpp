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

#include <cstddef>
#include <vector>

namespace hsc::nn {

/// Dense N x C x H x W tensor, row-major.
template <typename T>
struct Tensor4 {
    int n = 0;
    int c = 0;
    int h = 0;
    int w = 0;
    std::vector<T> data;

    Tensor4() = default;
    Tensor4(int n_, int c_, int h_, int w_, T fill = T(0))
        : n(n_), c(c_), h(h_), w(w_), data(static_cast<size_t>(n_) * c_ * h_ * w_, fill) {}

    size_t size() const { return data.size(); }
    size_t plane() const { return static_cast<size_t>(h) * w; }

    size_t index(int in, int ic, int y, int x) const {
        return ((static_cast<size_t>(in) * c + ic) * h + y) * w + x;
    }
    T& at(int in, int ic, int y, int x) { return data[index(in, ic, y, x)]; }
    const T& at(int in, int ic, int y, int x) const { return data[index(in, ic, y, x)]; }

    T* channel(int in, int ic) { return data.data() + index(in, ic, 0, 0); }
    const T* channel(int in, int ic) const { return data.data() + index(in, ic, 0, 0); }

    bool same_shape(const Tensor4& o) const { return n == o.n && c == o.c && h == o.h && w == o.w; }

    template <typename U>
    Tensor4<U> cast() const {
        Tensor4<U> out(n, c, h, w);
        for (size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<U>(data[i]);
        return out;
    }
};

}  // namespace hsc::nn
