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
#include <vector>

namespace hsc::nn {

template <typename T>
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int64_t t = 0;
    std::vector<std::vector<T>> m;  // one buffer per parameter tensor
    std::vector<std::vector<T>> v;
};

/// One bias-corrected Adam update. params[i] and grads[i] must have equal
/// length; moment buffers are allocated on the first call.
template <typename T>
void adam_step(std::span<const std::span<T>> params, std::span<const std::span<const T>> grads, AdamState<T>& state,
               double lr);

struct CosineSchedule {
    double lr0 = 2e-4;
    double lr_min = 0.0;
    int64_t total_steps = 1;

    void validate() const;
};

/// lr_min + (lr0 - lr_min) * (1 + cos(pi * t / T)) / 2 for 0 <= t <= T.
double cosine_lr(const CosineSchedule& schedule, int64_t t);

}  // namespace hsc::nn
