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

#include "hsc/inverse_isp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hsc/error.hpp"

namespace hsc {

nlohmann::json to_json(const ReconstructionMeta& meta) {
    return {{"source_id", meta.source_id},        {"gamma", meta.gamma},
            {"g_red", meta.gains.red},             {"g_blue", meta.gains.blue},
            {"digital_gain", meta.digital_gain},   {"seed", meta.seed}};
}

ReconstructionMeta reconstruction_meta_from_json(const nlohmann::json& j) {
    ReconstructionMeta m;
    m.source_id = j.value("source_id", "");
    m.gamma = j.value("gamma", 3.0);
    m.gains.red = j.value("g_red", 1.0);
    m.gains.blue = j.value("g_blue", 1.0);
    m.digital_gain = j.value("digital_gain", 1.0);
    m.seed = j.value("seed", uint64_t{0});
    return m;
}

nlohmann::json to_json(const CameraProfile& p) {
    return {{"system_gain", p.system_gain},
            {"ccm", p.ccm},
            {"wb_red", {p.wb_red.low, p.wb_red.high}},
            {"wb_blue", {p.wb_blue.low, p.wb_blue.high}},
            {"digital_gain", p.digital_gain},
            {"gamma", p.gamma},
            {"black_level", p.black_level},
            {"white_level", p.white_level},
            {"bit_depth", p.bit_depth},
            {"pattern", to_string(p.pattern)}};
}

CameraProfile camera_profile_from_json(const nlohmann::json& j, const CameraProfile& defaults) {
    CameraProfile p = defaults;
    const auto interval = [&](const char* key, Interval& out) {
        if (!j.contains(key)) return;
        const auto v = j.at(key).get<std::vector<double>>();
        require(v.size() == 2, ErrorCode::InvariantViolation, std::string(key) + " must be [low, high]");
        out = {v[0], v[1]};
    };
    p.system_gain = j.value("system_gain", p.system_gain);
    if (j.contains("ccm")) {
        const auto m = j.at("ccm").get<std::vector<double>>();
        require(m.size() == 9, ErrorCode::InvariantViolation, "ccm must hold 9 row-major entries");
        std::copy(m.begin(), m.end(), p.ccm.begin());
    }
    interval("wb_red", p.wb_red);
    interval("wb_blue", p.wb_blue);
    p.digital_gain = j.value("digital_gain", p.digital_gain);
    p.gamma = j.value("gamma", p.gamma);
    p.black_level = j.value("black_level", p.black_level);
    p.white_level = j.value("white_level", p.white_level);
    p.bit_depth = j.value("bit_depth", p.bit_depth);
    if (j.contains("pattern")) p.pattern = parse_bayer_pattern(j.at("pattern").get<std::string>());
    p.validate();
    return p;
}

LinearImage dequantize(const RgbImage8& img, Rng& rng, bool dither) {
    LinearImage out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) {
        const double u = dither ? rng.uniform() : 0.5;
        out.data[i] = (img.data[i] + u) / 256.0;
    }
    return out;
}

LinearImage gamma_decompress(LinearImage img, double gamma) {
    require(gamma > 0, ErrorCode::InvariantViolation, "gamma must be positive");
    for (double& v : img.data) {
        require(v >= 0, ErrorCode::NegativeInput, "gamma decompression of a negative value");
        v = std::pow(v, gamma);
    }
    return img;
}

LinearImage gamma_compress(LinearImage img, double gamma) {
    require(gamma > 0, ErrorCode::InvariantViolation, "gamma must be positive");
    const double inv = 1.0 / gamma;
    for (double& v : img.data) {
        require(v >= 0, ErrorCode::NegativeInput, "gamma compression of a negative value");
        v = std::pow(v, inv);
    }
    return img;
}

LinearImage apply_ccm(LinearImage img, const Mat3& m) {
    for (size_t i = 0; i < img.data.size(); i += 3) {
        const double r = img.data[i], g = img.data[i + 1], b = img.data[i + 2];
        img.data[i] = m[0] * r + m[1] * g + m[2] * b;
        img.data[i + 1] = m[3] * r + m[4] * g + m[5] * b;
        img.data[i + 2] = m[6] * r + m[7] * g + m[8] * b;
    }
    return img;
}

LinearImage invert_ccm(LinearImage img, const Mat3& ccm) { return apply_ccm(std::move(img), inverse(ccm)); }

WbGains sample_wb_gains(const CameraProfile& profile, Rng& rng) {
    WbGains g;
    g.red = rng.uniform(profile.wb_red.low, profile.wb_red.high);
    g.blue = rng.uniform(profile.wb_blue.low, profile.wb_blue.high);
    return g;
}

namespace {

void check_gains(WbGains gains) {
    require(gains.red > 0 && gains.blue > 0, ErrorCode::NonPositiveGain, "white-balance gains must be positive");
}

LinearImage scale_channels(LinearImage img, double r, double b) {
    for (size_t i = 0; i < img.data.size(); i += 3) {
        img.data[i] *= r;
        img.data[i + 2] *= b;
    }
    return img;
}

}  // namespace

LinearImage apply_white_balance(LinearImage img, WbGains gains) {
    check_gains(gains);
    return scale_channels(std::move(img), gains.red, gains.blue);
}

LinearImage invert_white_balance(LinearImage img, WbGains gains) {
    check_gains(gains);
    for (size_t i = 0; i < img.data.size(); i += 3) {
        img.data[i] /= gains.red;
        img.data[i + 2] /= gains.blue;
    }
    return img;
}

LinearImage apply_gain(LinearImage img, double digital_gain) {
    require(digital_gain > 0, ErrorCode::NonPositiveGain, "digital gain must be positive");
    for (double& v : img.data) v *= digital_gain;
    return img;
}

LinearImage invert_gain(LinearImage img, double digital_gain) {
    require(digital_gain > 0, ErrorCode::NonPositiveGain, "digital gain must be positive");
    for (double& v : img.data) v /= digital_gain;
    return img;
}

RawFrame mosaic(const LinearImage& img, const CameraProfile& profile) {
    require(img.width % 2 == 0 && img.height % 2 == 0 && img.width > 0 && img.height > 0, ErrorCode::OddDimensions,
            "mosaic needs even dimensions, got " + std::to_string(img.width) + "x" + std::to_string(img.height));
    RawFrame out = RawFrame::filled(img.width, img.height, profile.black_level, profile.pattern, profile.black_level,
                                    profile.white_level);
    const double range = out.range();
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const int c = static_cast<int>(channel_at(profile.pattern, y, x));
            const double v = std::clamp(img.at(x, y, c), 0.0, 1.0);
            out.at(x, y) = static_cast<uint16_t>(std::lround(v * range) + profile.black_level);
        }
    }
    return out;
}

LinearImage demosaic_bilinear(const RawFrame& frame) {
    frame.validate();
    const int w = frame.width, h = frame.height;
    const double black = frame.black_level, range = frame.range();

    std::vector<double> norm(frame.data.size());
    for (size_t i = 0; i < norm.size(); ++i) norm[i] = std::max(0.0, (frame.data[i] - black) / range);

    // Mirror so that index -1 maps to 1 and w maps to w - 2, keeping parity.
    auto mirror = [](int i, int n) { return i < 0 ? -i : (i >= n ? 2 * (n - 1) - i : i); };
    auto sample = [&](int x, int y) { return norm[static_cast<size_t>(mirror(y, h)) * w + mirror(x, w)]; };

    static constexpr int kCross[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    static constexpr int kDiag[4][2] = {{-1, -1}, {1, -1}, {-1, 1}, {1, 1}};

    LinearImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Channel native = channel_at(frame.pattern, y, x);
            for (int c = 0; c < 3; ++c) {
                const Channel want = static_cast<Channel>(c);
                if (want == native) {
                    out.at(x, y, c) = norm[static_cast<size_t>(y) * w + x];
                    continue;
                }
                double sum = 0;
                int n = 0;
                for (const auto& d : kCross) {
                    // Parity, not the mirrored coordinate, decides the channel.
                    if (channel_at(frame.pattern, y + d[1] + 2, x + d[0] + 2) == want) {
                        sum += sample(x + d[0], y + d[1]);
                        ++n;
                    }
                }
                if (n == 0) {
                    for (const auto& d : kDiag) {
                        if (channel_at(frame.pattern, y + d[1] + 2, x + d[0] + 2) == want) {
                            sum += sample(x + d[0], y + d[1]);
                            ++n;
                        }
                    }
                }
                out.at(x, y, c) = sum / n;
            }
        }
    }
    return out;
}

Reconstruction reconstruct_long_exposure(const RgbImage8& img, const ReconstructionConfig& cfg, Rng& rng) {
    const CameraProfile& p = cfg.profile;
    p.validate();
    require(img.width % 2 == 0 && img.height % 2 == 0, ErrorCode::OddDimensions, "source image needs even dimensions");

    Reconstruction out;
    out.meta.gamma = p.gamma;
    out.meta.digital_gain = p.digital_gain;
    out.meta.seed = cfg.seed;

    LinearImage lin = dequantize(img, rng, cfg.dither);
    lin = gamma_decompress(std::move(lin), p.gamma);
    lin = invert_ccm(std::move(lin), p.ccm);
    out.meta.gains = sample_wb_gains(p, rng);
    lin = invert_white_balance(std::move(lin), out.meta.gains);
    lin = invert_gain(std::move(lin), p.digital_gain);
    out.frame = mosaic(lin, p);
    return out;
}

RgbImage8 quantize8(const LinearImage& img) {
    RgbImage8 out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = static_cast<uint8_t>(std::lround(std::clamp(img.data[i], 0.0, 1.0) * 255.0));
    return out;
}

RgbImage8 forward_isp(const RawFrame& frame, WbGains gains, const CameraProfile& profile) {
    LinearImage lin = demosaic_bilinear(frame);
    lin = apply_gain(std::move(lin), profile.digital_gain);
    lin = apply_white_balance(std::move(lin), gains);
    lin = apply_ccm(std::move(lin), profile.ccm);
    for (double& v : lin.data) v = std::clamp(v, 0.0, 1.0);
    return quantize8(gamma_compress(std::move(lin), profile.gamma));
}

}  // namespace hsc
