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
#include <vector>

#include "hsc/image.hpp"
#include "hsc/rng.hpp"

namespace hsc::scenes {

// Procedural stand-ins for photographs and darkroom captures, used by the
// desk-scale experiments, the tests and the demo data generator.

/// Multi-octave value noise with a roughly 1/f amplitude spectrum, a few
/// hard-edged occluders and smooth chroma, stretched to [lo, hi].
RgbImage8 natural_image(int width, int height, Rng& rng, uint8_t lo = 0, uint8_t hi = 255);

struct BiasNoise {
    double pixel_sigma = 4.0;  // iid per pixel and frame
    double row_sigma = 3.0;    // per-row offset, redrawn every frame (streaks)
};

/// pedestal + row offset + pixel noise, rounded and clamped to [0, white].
RawFrame bias_frame(int width, int height, const CameraProfile& profile, const BiasNoise& noise, Rng& rng,
                    double shutter_s = 0.0);

BiasFrameDB bias_database(int width, int height, const CameraProfile& profile, const BiasNoise& noise,
                          const std::vector<double>& shutters, int frames_per_shutter, uint64_t seed);

/// Burst of uniformly lit flats: black + Poisson(level / K) * K, rounded.
std::vector<RawFrame> flat_burst(int width, int height, double level, double system_gain, int frames,
                                 const CameraProfile& profile, Rng& rng);

}  // namespace hsc::scenes
