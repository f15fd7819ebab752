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

#include "hsc/rng.hpp"

#include <cmath>
#include <numbers>

namespace hsc {

namespace {
constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

// SplitMix64 finalizer.
uint64_t Rng::mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t Rng::derive(uint64_t seed, uint64_t index) {
    return mix(mix(seed + kGolden) ^ mix(index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

uint64_t Rng::next_u64() {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) {
    if (lo == hi) return lo;
    const double v = lo + (hi - lo) * uniform();
    return v < hi ? v : std::nextafter(hi, lo);
}

uint64_t Rng::below(uint64_t n) {
    // Rejection on the top of the range keeps the draw exactly uniform.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace hsc
