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

#include "hsc/noise_model.hpp"

#include <algorithm>
#include <cmath>

#include "hsc/error.hpp"

namespace hsc {

void SynthesisConfig::validate() const {
    require(std::isfinite(ratio) && ratio >= 1.0, ErrorCode::InvariantViolation, "ratio R must be >= 1");
    require(std::isfinite(system_gain) && system_gain > 0, ErrorCode::InvariantViolation, "system gain K must be > 0");
}

nlohmann::json to_json(const SynthesisConfig& c) {
    return {{"ratio", c.ratio},         {"system_gain", c.system_gain}, {"enable_sd", c.enable_sd},
            {"enable_si", c.enable_si}, {"shutter_s", c.shutter_s},     {"seed", c.seed}};
}

SynthesisConfig synthesis_config_from_json(const nlohmann::json& j, const SynthesisConfig& defaults) {
    SynthesisConfig c = defaults;
    c.ratio = j.value("ratio", c.ratio);
    c.system_gain = j.value("system_gain", c.system_gain);
    c.enable_sd = j.value("enable_sd", c.enable_sd);
    c.enable_si = j.value("enable_si", c.enable_si);
    c.shutter_s = j.value("shutter_s", c.shutter_s);
    c.seed = j.value("seed", c.seed);
    return c;
}

double sample_poisson(double lambda, Rng& rng) {
    if (lambda <= 0) return 0.0;
    if (lambda < kPoissonNormalThreshold) {
        const double u = rng.uniform();
        double p = std::exp(-lambda);
        double cdf = p;
        int k = 0;
        while (u > cdf && k < 1000) {
            ++k;
            p *= lambda / k;
            cdf += p;
        }
        return k;
    }
    return std::max(0.0, std::round(lambda + std::sqrt(lambda) * rng.normal()));
}

std::vector<double> shot_noise(std::span<const double> signal, double system_gain, Rng& rng) {
    require(system_gain > 0, ErrorCode::InvariantViolation, "system gain K must be > 0");
    std::vector<double> out(signal.size());
    for (size_t i = 0; i < signal.size(); ++i) {
        require(signal[i] >= 0, ErrorCode::NegativeSignal, "shot noise needs a nonnegative signal");
        out[i] = sample_poisson(signal[i] / system_gain, rng) * system_gain;
    }
    return out;
}

BiasPatch sample_bias(const BiasFrameDB& db, double shutter_s, Crop crop, Rng& rng) {
    const auto& frames = db.bucket(shutter_s);
    const size_t index = frames.size() == 1 ? 0 : static_cast<size_t>(rng.below(frames.size()));
    const RawFrame& src = frames[index].frame;
    require(crop.x >= 0 && crop.y >= 0 && crop.width > 0 && crop.height > 0 && crop.x + crop.width <= src.width &&
                crop.y + crop.height <= src.height,
            ErrorCode::CropOutOfBounds, "bias crop outside the " + std::to_string(src.width) + "x" +
                                            std::to_string(src.height) + " bias frame");
    return {frames[index].id, index, src.crop(crop.x, crop.y, crop.width, crop.height)};
}

nlohmann::json to_json(const SynthesisMeta& m) {
    return {{"source_id", m.source_id}, {"R", m.ratio},
            {"K", m.system_gain},        {"enable_sd", m.enable_sd},
            {"enable_si", m.enable_si},  {"shutter_s", m.shutter_s},
            {"bias_frame_id", m.bias_frame_id}, {"seed", m.seed}};
}

Synthesis synthesize_noisy(const RawFrame& clean, const SynthesisConfig& cfg, const BiasFrameDB* db, Rng& rng,
                           int origin_x, int origin_y) {
    clean.validate();
    cfg.validate();

    Synthesis out;
    out.meta.ratio = cfg.ratio;
    out.meta.system_gain = cfg.system_gain;
    out.meta.enable_sd = cfg.enable_sd;
    out.meta.enable_si = cfg.enable_si;
    out.meta.shutter_s = cfg.shutter_s;
    out.meta.seed = cfg.seed;

    const double black = clean.black_level;
    std::vector<double> signal(clean.data.size());
    for (size_t i = 0; i < signal.size(); ++i) signal[i] = std::max(0.0, clean.data[i] - black) / cfg.ratio;

    if (cfg.enable_sd) signal = shot_noise(signal, cfg.system_gain, rng);

    if (cfg.enable_si) {
        require(db != nullptr, ErrorCode::UnknownShutter, "signal-independent noise requested without a bias database");
        const auto& bucket = db->bucket(cfg.shutter_s);
        const RawFrame& ref = bucket.front().frame;
        require(ref.pattern == clean.pattern && ref.black_level == clean.black_level, ErrorCode::DimensionMismatch,
                "bias frames and clean frame disagree on pattern or black level");
        require(origin_x >= 0 && origin_y >= 0 && origin_x + clean.width <= ref.width &&
                    origin_y + clean.height <= ref.height,
                ErrorCode::DimensionMismatch, "bias frames do not cover the clean frame at the requested origin");
        require(origin_x % 2 == 0 && origin_y % 2 == 0, ErrorCode::DimensionMismatch,
                "bias crop origin must be even to keep the Bayer phase");
        BiasPatch bias = sample_bias(*db, cfg.shutter_s, {origin_x, origin_y, clean.width, clean.height}, rng);
        for (size_t i = 0; i < signal.size(); ++i) signal[i] += bias.patch.data[i] - black;
        out.meta.bias_frame_id = bias.frame_id;
    }

    out.frame = clean;
    const double white = clean.white_level;
    for (size_t i = 0; i < signal.size(); ++i)
        out.frame.data[i] = static_cast<uint16_t>(std::clamp(std::round(signal[i] + black), 0.0, white));
    return out;
}

double estimate_system_gain(std::span<const std::vector<RawFrame>> levels) {
    require(levels.size() >= 2, ErrorCode::InsufficientData, "need at least two illumination levels");
    double sum_mv = 0, sum_mm = 0;
    for (const auto& burst : levels) {
        require(burst.size() >= 2, ErrorCode::InsufficientData, "need at least two frames per level");
        const RawFrame& ref = burst.front();
        for (const RawFrame& f : burst) {
            f.validate();
            require(f.same_geometry(ref), ErrorCode::DimensionMismatch, "flats within a level differ in geometry");
        }
        const size_t n = ref.data.size();
        const double t = static_cast<double>(burst.size());
        double level_mean = 0, level_var = 0;
        for (size_t i = 0; i < n; ++i) {
            double s1 = 0, s2 = 0;
            for (const RawFrame& f : burst) {
                const double v = static_cast<double>(f.data[i]) - ref.black_level;
                s1 += v;
                s2 += v * v;
            }
            const double mean = s1 / t;
            // Unbiased temporal variance; bursts are short.
            level_var += std::max(0.0, (s2 - s1 * mean) / (t - 1));
            level_mean += mean;
        }
        level_mean /= static_cast<double>(n);
        level_var /= static_cast<double>(n);
        sum_mv += level_mean * level_var;
        sum_mm += level_mean * level_mean;
    }
    require(sum_mm > 0, ErrorCode::InsufficientData, "all flats sit at the black level");
    const double k = sum_mv / sum_mm;
    require(k > 0 && std::isfinite(k), ErrorCode::NonPositiveSlope, "photon transfer slope is not positive");
    return k;
}

}  // namespace hsc
