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

#include "hsc/nn/optim.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hsc/error.hpp"

namespace hsc::nn {

template <typename T>
void adam_step(std::span<const std::span<T>> params, std::span<const std::span<const T>> grads, AdamState<T>& state,
               double lr) {
    require(params.size() == grads.size(), ErrorCode::ShapeMismatch, "parameter and gradient lists differ in length");
    if (state.m.empty()) {
        for (const auto& p : params) {
            state.m.emplace_back(p.size(), T(0));
            state.v.emplace_back(p.size(), T(0));
        }
    }
    require(state.m.size() == params.size(), ErrorCode::ShapeMismatch, "optimizer state does not match parameters");
    for (size_t k = 0; k < params.size(); ++k)
        require(params[k].size() == grads[k].size() && state.m[k].size() == params[k].size(), ErrorCode::ShapeMismatch,
                "parameter tensor " + std::to_string(k) + " does not match its gradient or moments");

    ++state.t;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    const T b1 = static_cast<T>(state.beta1), b2 = static_cast<T>(state.beta2);
    const T step = static_cast<T>(lr / bc1);
    const T inv_sqrt_bc2 = static_cast<T>(1.0 / std::sqrt(bc2));
    const T eps = static_cast<T>(state.eps);

    for (size_t k = 0; k < params.size(); ++k) {
        T* p = params[k].data();
        const T* g = grads[k].data();
        T* m = state.m[k].data();
        T* v = state.v[k].data();
        for (size_t i = 0; i < params[k].size(); ++i) {
            m[i] = b1 * m[i] + (T(1) - b1) * g[i];
            v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
            p[i] -= step * m[i] / (std::sqrt(v[i]) * inv_sqrt_bc2 + eps);
        }
    }
}

template void adam_step(std::span<const std::span<float>>, std::span<const std::span<const float>>,
                        AdamState<float>&, double);
template void adam_step(std::span<const std::span<double>>, std::span<const std::span<const double>>,
                        AdamState<double>&, double);

void CosineSchedule::validate() const {
    require(lr_min >= 0 && lr_min <= lr0, ErrorCode::InvariantViolation, "cosine schedule needs 0 <= lr_min <= lr0");
    require(total_steps >= 1, ErrorCode::InvariantViolation, "cosine schedule needs at least one step");
}

double cosine_lr(const CosineSchedule& s, int64_t t) {
    s.validate();
    require(t >= 0 && t <= s.total_steps, ErrorCode::StepOutOfRange,
            "step " + std::to_string(t) + " outside [0, " + std::to_string(s.total_steps) + "]");
    const double phase = std::numbers::pi * static_cast<double>(t) / static_cast<double>(s.total_steps);
    return s.lr_min + 0.5 * (s.lr0 - s.lr_min) * (1.0 + std::cos(phase));
}

}  // namespace hsc::nn
