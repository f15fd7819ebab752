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

namespace hsc {

/// Counter-based generator: draw k of a stream is mix(key + k * golden), so
/// the stream depends only on the 64-bit key and is identical on every
/// platform. Floating-point helpers are layered on top of next_u64().
class Rng {
public:
    explicit Rng(uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

    /// Child seed for an independent sub-stream, e.g. (run seed, image index).
    static uint64_t derive(uint64_t seed, uint64_t index);

    uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Uniform on [lo, hi); returns lo when lo == hi.
    double uniform(double lo, double hi);

    /// Unbiased integer in [0, n). n must be positive.
    uint64_t below(uint64_t n);

    /// Standard normal via Box-Muller (consumes two uniforms).
    double normal();

    uint64_t counter() const { return counter_; }

    static uint64_t mix(uint64_t z);

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

}  // namespace hsc
