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

#include "hsc/scenes.hpp"

#include <algorithm>
#include <cmath>

#include "hsc/noise_model.hpp"

namespace hsc::scenes {

namespace {

// Smoothly interpolated random lattice with the given cell size.
std::vector<double> value_noise(int width, int height, int cell, Rng& rng) {
    const int gw = width / cell + 2, gh = height / cell + 2;
    std::vector<double> grid(static_cast<size_t>(gw) * gh);
    for (double& v : grid) v = rng.uniform(-1.0, 1.0);
    auto smooth = [](double t) { return t * t * (3 - 2 * t); };
    std::vector<double> out(static_cast<size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        const double fy = static_cast<double>(y) / cell;
        const int y0 = static_cast<int>(fy);
        const double ty = smooth(fy - y0);
        for (int x = 0; x < width; ++x) {
            const double fx = static_cast<double>(x) / cell;
            const int x0 = static_cast<int>(fx);
            const double tx = smooth(fx - x0);
            auto g = [&](int gx, int gy) { return grid[static_cast<size_t>(gy) * gw + gx]; };
            const double top = g(x0, y0) * (1 - tx) + g(x0 + 1, y0) * tx;
            const double bot = g(x0, y0 + 1) * (1 - tx) + g(x0 + 1, y0 + 1) * tx;
            out[static_cast<size_t>(y) * width + x] = top * (1 - ty) + bot * ty;
        }
    }
    return out;
}

std::vector<double> fractal_field(int width, int height, Rng& rng) {
    std::vector<double> field(static_cast<size_t>(width) * height, 0.0);
    for (int cell = std::max(width, height) / 2; cell >= 2; cell /= 2) {
        const auto layer = value_noise(width, height, cell, rng);
        const double amp = static_cast<double>(cell);  // 1/f amplitude
        for (size_t i = 0; i < field.size(); ++i) field[i] += amp * layer[i];
    }
    return field;
}

}  // namespace

RgbImage8 natural_image(int width, int height, Rng& rng, uint8_t lo, uint8_t hi) {
    const auto luma = fractal_field(width, height, rng);
    std::vector<std::vector<double>> chroma;
    for (int c = 0; c < 3; ++c) chroma.push_back(value_noise(width, height, std::max(8, width / 4), rng));

    std::vector<double> rgb(static_cast<size_t>(width) * height * 3);
    for (size_t i = 0; i < luma.size(); ++i)
        for (int c = 0; c < 3; ++c) rgb[i * 3 + c] = luma[i] * (1.0 + 0.35 * chroma[c][i]);

    // Occluders give the image hard edges.
    double span_lo = *std::min_element(rgb.begin(), rgb.end());
    double span_hi = *std::max_element(rgb.begin(), rgb.end());
    const int shapes = 3 + static_cast<int>(rng.below(4));
    for (int s = 0; s < shapes; ++s) {
        const double cx = rng.uniform(0, width), cy = rng.uniform(0, height);
        const double rx = rng.uniform(0.05, 0.25) * width, ry = rng.uniform(0.05, 0.25) * height;
        const bool ellipse = rng.uniform() < 0.5;
        double color[3];
        for (double& c : color) c = rng.uniform(span_lo, span_hi);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const double dx = (x - cx) / rx, dy = (y - cy) / ry;
                const bool inside = ellipse ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
                if (!inside) continue;
                const size_t i = static_cast<size_t>(y) * width + x;
                for (int c = 0; c < 3; ++c) rgb[i * 3 + c] = 0.7 * color[c] + 0.3 * rgb[i * 3 + c];
            }
        }
    }

    span_lo = *std::min_element(rgb.begin(), rgb.end());
    span_hi = *std::max_element(rgb.begin(), rgb.end());
    const double scale = span_hi > span_lo ? 1.0 / (span_hi - span_lo) : 0.0;
    RgbImage8 img(width, height);
    for (size_t i = 0; i < rgb.size(); ++i) {
        const double t = (rgb[i] - span_lo) * scale;
        img.data[i] = static_cast<uint8_t>(std::lround(lo + t * (hi - lo)));
    }
    return img;
}

RawFrame bias_frame(int width, int height, const CameraProfile& profile, const BiasNoise& noise, Rng& rng,
                    double shutter_s) {
    RawFrame f = RawFrame::filled(width, height, profile.black_level, profile.pattern, profile.black_level,
                                  profile.white_level, shutter_s);
    for (int y = 0; y < height; ++y) {
        const double row = noise.row_sigma * rng.normal();
        for (int x = 0; x < width; ++x) {
            const double v = profile.black_level + row + noise.pixel_sigma * rng.normal();
            f.at(x, y) = static_cast<uint16_t>(std::clamp(std::round(v), 0.0, static_cast<double>(profile.white_level)));
        }
    }
    return f;
}

BiasFrameDB bias_database(int width, int height, const CameraProfile& profile, const BiasNoise& noise,
                          const std::vector<double>& shutters, int frames_per_shutter, uint64_t seed) {
    BiasFrameDB db;
    db.device = "synthetic";
    db.notes = "procedural striped bias frames";
    for (size_t s = 0; s < shutters.size(); ++s) {
        auto& bucket = db.buckets[shutters[s]];
        for (int i = 0; i < frames_per_shutter; ++i) {
            Rng rng(Rng::derive(seed, s * 100003 + static_cast<uint64_t>(i)));
            bucket.push_back({"bias_" + std::to_string(s) + "_" + std::to_string(i) + ".hsrw",
                              bias_frame(width, height, profile, noise, rng, shutters[s])});
        }
    }
    return db;
}

std::vector<RawFrame> flat_burst(int width, int height, double level, double system_gain, int frames,
                                 const CameraProfile& profile, Rng& rng) {
    std::vector<RawFrame> burst;
    const double white = profile.white_level;
    for (int t = 0; t < frames; ++t) {
        RawFrame f = RawFrame::filled(width, height, profile.black_level, profile.pattern, profile.black_level,
                                      profile.white_level);
        for (auto& v : f.data) {
            const double s = sample_poisson(level / system_gain, rng) * system_gain;
            v = static_cast<uint16_t>(std::clamp(std::round(s + profile.black_level), 0.0, white));
        }
        burst.push_back(std::move(f));
    }
    return burst;
}

}  // namespace hsc::scenes
