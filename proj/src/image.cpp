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

#include "hsc/image.hpp"

#include <cmath>

#include "hsc/error.hpp"

namespace hsc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::TruncatedData: return "TruncatedData";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::NegativeInput: return "NegativeInput";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::NonPositiveGain: return "NonPositiveGain";
        case ErrorCode::OddDimensions: return "OddDimensions";
        case ErrorCode::NegativeSignal: return "NegativeSignal";
        case ErrorCode::UnknownShutter: return "UnknownShutter";
        case ErrorCode::CropOutOfBounds: return "CropOutOfBounds";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::NonPositiveSlope: return "NonPositiveSlope";
        case ErrorCode::TooFewFrames: return "TooFewFrames";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::BinMismatch: return "BinMismatch";
        case ErrorCode::ZeroTotalEnergy: return "ZeroTotalEnergy";
        case ErrorCode::ImageTooSmall: return "ImageTooSmall";
        case ErrorCode::MissingPair: return "MissingPair";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::StepOutOfRange: return "StepOutOfRange";
        case ErrorCode::MalformedCheckpoint: return "MalformedCheckpoint";
        case ErrorCode::ArchMismatch: return "ArchMismatch";
        case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    }
    return "Unknown";
}

const char* to_string(BayerPattern pattern) {
    switch (pattern) {
        case BayerPattern::RGGB: return "RGGB";
        case BayerPattern::BGGR: return "BGGR";
        case BayerPattern::GRBG: return "GRBG";
        case BayerPattern::GBRG: return "GBRG";
    }
    return "?";
}

BayerPattern parse_bayer_pattern(const std::string& name) {
    if (name == "RGGB") return BayerPattern::RGGB;
    if (name == "BGGR") return BayerPattern::BGGR;
    if (name == "GRBG") return BayerPattern::GRBG;
    if (name == "GBRG") return BayerPattern::GBRG;
    fail(ErrorCode::InvariantViolation, "unknown Bayer pattern '" + name + "'");
}

RawFrame RawFrame::filled(int width, int height, uint16_t value, BayerPattern pattern, uint16_t black,
                          uint16_t white, double shutter_s) {
    RawFrame f;
    f.width = width;
    f.height = height;
    f.data.assign(static_cast<size_t>(width) * height, value);
    f.pattern = pattern;
    f.black_level = black;
    f.white_level = white;
    f.shutter_s = shutter_s;
    return f;
}

void RawFrame::validate() const {
    require(width > 0 && height > 0, ErrorCode::InvariantViolation, "frame dimensions must be positive");
    require(width % 2 == 0 && height % 2 == 0, ErrorCode::InvariantViolation,
            "frame dimensions must be even, got " + std::to_string(width) + "x" + std::to_string(height));
    require(data.size() == static_cast<size_t>(width) * height, ErrorCode::InvariantViolation,
            "data length does not match width*height");
    require(black_level < white_level, ErrorCode::InvariantViolation, "black_level must be below white_level");
    require(std::isfinite(shutter_s) && shutter_s >= 0, ErrorCode::InvariantViolation, "invalid shutter time");
}

RawFrame RawFrame::crop(int x, int y, int w, int h) const {
    require(x >= 0 && y >= 0 && w > 0 && h > 0 && x + w <= width && y + h <= height, ErrorCode::CropOutOfBounds,
            "crop (" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(w) + "," +
                std::to_string(h) + ") outside " + std::to_string(width) + "x" + std::to_string(height));
    RawFrame out = *this;
    out.width = w;
    out.height = h;
    out.data.resize(static_cast<size_t>(w) * h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) out.data[static_cast<size_t>(r) * w + c] = at(x + c, y + r);
    return out;
}

bool LinearImage::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

double determinant(const Mat3& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Mat3 inverse(const Mat3& m) {
    const double det = determinant(m);
    require(std::abs(det) > 1e-9, ErrorCode::SingularMatrix, "matrix determinant is ~0");
    const double s = 1.0 / det;
    return {(m[4] * m[8] - m[5] * m[7]) * s, (m[2] * m[7] - m[1] * m[8]) * s, (m[1] * m[5] - m[2] * m[4]) * s,
            (m[5] * m[6] - m[3] * m[8]) * s, (m[0] * m[8] - m[2] * m[6]) * s, (m[2] * m[3] - m[0] * m[5]) * s,
            (m[3] * m[7] - m[4] * m[6]) * s, (m[1] * m[6] - m[0] * m[7]) * s, (m[0] * m[4] - m[1] * m[3]) * s};
}

Mat3 multiply(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            for (int k = 0; k < 3; ++k) out[r * 3 + c] += a[r * 3 + k] * b[k * 3 + c];
    return out;
}

void CameraProfile::validate() const {
    require(system_gain > 0, ErrorCode::InvariantViolation, "system gain must be positive");
    require(digital_gain > 0, ErrorCode::InvariantViolation, "digital gain must be positive");
    require(gamma > 0, ErrorCode::InvariantViolation, "gamma must be positive");
    require(std::abs(determinant(ccm)) > 1e-9, ErrorCode::InvariantViolation, "ccm must be invertible");
    for (const Interval& i : {wb_red, wb_blue})
        require(i.low > 0 && i.low <= i.high, ErrorCode::InvariantViolation, "white-balance range must be 0 < low <= high");
    require(black_level < white_level, ErrorCode::InvariantViolation, "black_level must be below white_level");
    require(bit_depth > 0 && bit_depth <= 16, ErrorCode::InvariantViolation, "bit depth must be in 1..16");
}

namespace {
bool same_shutter(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }
}  // namespace

const std::vector<BiasFrame>& BiasFrameDB::bucket(double shutter_s) const {
    for (const auto& [key, frames] : buckets)
        if (same_shutter(key, shutter_s)) return frames;
    fail(ErrorCode::UnknownShutter, "no bias frames for shutter " + std::to_string(shutter_s) + " s");
}

bool BiasFrameDB::has_bucket(double shutter_s) const {
    for (const auto& entry : buckets)
        if (same_shutter(entry.first, shutter_s)) return true;
    return false;
}

void BiasFrameDB::validate() const {
    for (const auto& [shutter, frames] : buckets) {
        require(!frames.empty(), ErrorCode::InvariantViolation, "empty bias bucket " + std::to_string(shutter));
        for (const BiasFrame& b : frames) {
            b.frame.validate();
            require(b.frame.same_geometry(frames.front().frame), ErrorCode::InvariantViolation,
                    "bias frame " + b.id + " differs in geometry from its bucket");
        }
    }
}

}  // namespace hsc
