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
#include <string>

#include "json.hpp"

#include "hsc/image.hpp"
#include "hsc/rng.hpp"

namespace hsc {

// Unprocessing of 8-bit RGB into linear raw, and the matching forward ISP.
//
// reconstruct:  dequantize -> gamma decompress -> inverse CCM
//               -> inverse WB -> inverse digital gain -> mosaic
// forward:      demosaic -> digital gain -> WB -> CCM -> clamp
//               -> gamma compress -> 8-bit quantize
//
// Tone mapping is not modelled in either direction.

struct WbGains {
    double red = 1.0;
    double blue = 1.0;  // green is fixed at 1
};

struct ReconstructionConfig {
    CameraProfile profile;
    bool dither = true;
    uint64_t seed = 0;
};

/// Parameters drawn while reconstructing one image; written as a JSON sidecar.
struct ReconstructionMeta {
    std::string source_id;
    double gamma = 3.0;
    WbGains gains;
    double digital_gain = 1.0;
    uint64_t seed = 0;
};

nlohmann::json to_json(const ReconstructionMeta& meta);
nlohmann::json to_json(const CameraProfile& profile);
/// Missing keys keep the values from `defaults`; the result is validated.
CameraProfile camera_profile_from_json(const nlohmann::json& j, const CameraProfile& defaults = {});
ReconstructionMeta reconstruction_meta_from_json(const nlohmann::json& j);

/// (v + u) / 256 with u ~ U[0,1) when dithering, u = 0.5 otherwise.
LinearImage dequantize(const RgbImage8& img, Rng& rng, bool dither);

LinearImage gamma_decompress(LinearImage img, double gamma);
LinearImage gamma_compress(LinearImage img, double gamma);

LinearImage apply_ccm(LinearImage img, const Mat3& ccm);
LinearImage invert_ccm(LinearImage img, const Mat3& ccm);

WbGains sample_wb_gains(const CameraProfile& profile, Rng& rng);
LinearImage apply_white_balance(LinearImage img, WbGains gains);
LinearImage invert_white_balance(LinearImage img, WbGains gains);

LinearImage apply_gain(LinearImage img, double digital_gain);
LinearImage invert_gain(LinearImage img, double digital_gain);

/// Samples the channel the Bayer pattern puts at each site and maps it to
/// round(clamp(v, 0, 1) * (white - black)) + black.
RawFrame mosaic(const LinearImage& img, const CameraProfile& profile);

/// Normalizes to [0, 1] and fills each missing channel with the mean of the
/// nearest same-color samples (cross neighbours first, else diagonals).
/// Borders mirror by one pixel so the Bayer phase is preserved.
LinearImage demosaic_bilinear(const RawFrame& frame);

struct Reconstruction {
    RawFrame frame;
    ReconstructionMeta meta;
};

Reconstruction reconstruct_long_exposure(const RgbImage8& img, const ReconstructionConfig& cfg, Rng& rng);

RgbImage8 forward_isp(const RawFrame& frame, WbGains gains, const CameraProfile& profile);

/// round(clamp(v, 0, 1) * 255) per sample.
RgbImage8 quantize8(const LinearImage& img);

}  // namespace hsc
