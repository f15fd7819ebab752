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

#include "json.hpp"

#include "hsc/image.hpp"
#include "hsc/rng.hpp"

namespace hsc {

// Short-exposure synthesis from a clean long exposure:
//
//   noisy = P((clean - black) / R / K) * K + (bias - black) + black
//
// The Poisson term is the signal-dependent part and the replayed bias frame
// the signal-independent part; each can be switched off.

struct SynthesisConfig {
    double ratio = 1.0;        // exposure amplification R >= 1
    double system_gain = 0.4;  // K, raw counts per photoelectron
    bool enable_sd = true;
    bool enable_si = true;
    double shutter_s = 0.0;  // bias bucket to draw from
    uint64_t seed = 0;

    void validate() const;
};

nlohmann::json to_json(const SynthesisConfig& cfg);
/// Missing keys keep the values from `defaults`.
SynthesisConfig synthesis_config_from_json(const nlohmann::json& j, const SynthesisConfig& defaults = {});

/// Poisson(lambda): sequential inversion below 30, rounded normal above.
double sample_poisson(double lambda, Rng& rng);

inline constexpr double kPoissonNormalThreshold = 30.0;

/// Poisson(signal / K) * K elementwise.
std::vector<double> shot_noise(std::span<const double> signal, double system_gain, Rng& rng);

struct Crop {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

struct BiasPatch {
    std::string frame_id;
    size_t frame_index = 0;
    RawFrame patch;
};

/// Crop of a uniformly chosen frame from the shutter bucket.
BiasPatch sample_bias(const BiasFrameDB& db, double shutter_s, Crop crop, Rng& rng);

struct SynthesisMeta {
    std::string source_id;
    double ratio = 1.0;
    double system_gain = 0.0;
    bool enable_sd = false;
    bool enable_si = false;
    double shutter_s = 0.0;
    std::string bias_frame_id;
    uint64_t seed = 0;
};

nlohmann::json to_json(const SynthesisMeta& meta);

struct Synthesis {
    RawFrame frame;
    SynthesisMeta meta;
};

/// Bias crop is taken at (origin_x, origin_y) with the clean frame's size so
/// that training crops stay spatially aligned with the dark-frame pattern.
Synthesis synthesize_noisy(const RawFrame& clean, const SynthesisConfig& cfg, const BiasFrameDB* db, Rng& rng,
                           int origin_x = 0, int origin_y = 0);

/// Photon-transfer fit. Each inner vector is a burst of flats at one
/// illumination level; returns K from var = K * mean through the origin.
double estimate_system_gain(std::span<const std::vector<RawFrame>> levels);

}  // namespace hsc
