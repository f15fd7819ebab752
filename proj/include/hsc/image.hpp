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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hsc {

enum class BayerPattern : uint8_t { RGGB = 0, BGGR = 1, GRBG = 2, GBRG = 3 };

enum class Channel : uint8_t { R = 0, G = 1, B = 2 };

/// Color filter at (row, col); depends only on the parity of both.
constexpr Channel channel_at(BayerPattern pattern, int row, int col) {
    const int quad = ((row & 1) << 1) | (col & 1);  // 0 TL, 1 TR, 2 BL, 3 BR
    switch (pattern) {
        case BayerPattern::RGGB: return quad == 0 ? Channel::R : quad == 3 ? Channel::B : Channel::G;
        case BayerPattern::BGGR: return quad == 0 ? Channel::B : quad == 3 ? Channel::R : Channel::G;
        case BayerPattern::GRBG: return quad == 1 ? Channel::R : quad == 2 ? Channel::B : Channel::G;
        case BayerPattern::GBRG: return quad == 1 ? Channel::B : quad == 2 ? Channel::R : Channel::G;
    }
    return Channel::G;
}

const char* to_string(BayerPattern pattern);
BayerPattern parse_bayer_pattern(const std::string& name);

/// Mosaicked sensor readout. Samples are row-major raw counts.
struct RawFrame {
    int width = 0;
    int height = 0;
    std::vector<uint16_t> data;
    BayerPattern pattern = BayerPattern::RGGB;
    uint16_t black_level = 0;
    uint16_t white_level = 65535;
    double shutter_s = 0.0;  // 0 when unknown

    static RawFrame filled(int width, int height, uint16_t value, BayerPattern pattern, uint16_t black,
                           uint16_t white, double shutter_s = 0.0);

    uint16_t at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    uint16_t& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    double range() const { return static_cast<double>(white_level) - black_level; }

    /// Throws InvariantViolation when a stored field is inconsistent.
    void validate() const;

    /// Sub-rectangle with the same metadata. (x, y) must be even to keep the
    /// Bayer phase.
    RawFrame crop(int x, int y, int w, int h) const;

    bool same_geometry(const RawFrame& other) const {
        return width == other.width && height == other.height && pattern == other.pattern &&
               black_level == other.black_level;
    }

    bool operator==(const RawFrame&) const = default;
};

/// Interleaved 3-channel linear-light image, nominal range [0, 1].
struct LinearImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    LinearImage() = default;
    LinearImage(int w, int h, double fill = 0.0) : width(w), height(h), data(static_cast<size_t>(w) * h * 3, fill) {}

    double at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    double& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }

    bool all_finite() const;
};

struct RgbImage8 {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;

    RgbImage8() = default;
    RgbImage8(int w, int h, uint8_t fill = 0) : width(w), height(h), data(static_cast<size_t>(w) * h * 3, fill) {}

    uint8_t at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    uint8_t& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }

    bool operator==(const RgbImage8&) const = default;
};

/// Row-major 3x3 matrix.
using Mat3 = std::array<double, 9>;

constexpr Mat3 identity_mat3() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }
double determinant(const Mat3& m);
Mat3 inverse(const Mat3& m);  // throws SingularMatrix
Mat3 multiply(const Mat3& a, const Mat3& b);

struct Interval {
    double low = 1.0;
    double high = 1.0;
};

/// Sensor constants shared by reconstruction, synthesis and the forward ISP.
struct CameraProfile {
    double system_gain = 0.4;  // raw counts per photoelectron
    Mat3 ccm = identity_mat3();
    Interval wb_red{1.4, 2.4};
    Interval wb_blue{1.4, 2.4};
    double digital_gain = 1.0;
    double gamma = 3.0;
    uint16_t black_level = 129;
    uint16_t white_level = 4095;
    int bit_depth = 12;
    BayerPattern pattern = BayerPattern::RGGB;

    void validate() const;
};

struct BiasFrame {
    std::string id;  // file name inside the database directory
    RawFrame frame;
};

/// Dark frames grouped by shutter time.
struct BiasFrameDB {
    std::string device;
    std::string notes;
    std::map<double, std::vector<BiasFrame>> buckets;

    /// Bucket whose key matches shutter_s to 1e-9 relative; throws UnknownShutter.
    const std::vector<BiasFrame>& bucket(double shutter_s) const;
    bool has_bucket(double shutter_s) const;

    void validate() const;
};

}  // namespace hsc
