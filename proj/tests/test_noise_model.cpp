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


#include <algorithm>
#include <array>
#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

#include "hsc/noise_model.hpp"
#include "hsc/scenes.hpp"

using namespace hsc;

namespace {

struct Moments {
    double mean = 0;
    double var = 0;
};

Moments moments(const std::vector<double>& v) {
    double s = 0, s2 = 0;
    for (double x : v) s += x;
    const double m = s / static_cast<double>(v.size());
    for (double x : v) s2 += (x - m) * (x - m);
    return {m, s2 / static_cast<double>(v.size() - 1)};
}

BiasFrameDB tagged_db(int frames, int w, int h, double shutter) {
    // Frame i carries value 129 + i everywhere so draws are identifiable.
    BiasFrameDB db;
    for (int i = 0; i < frames; ++i)
        db.buckets[shutter].push_back({"b" + std::to_string(i),
                                       RawFrame::filled(w, h, static_cast<uint16_t>(129 + i), BayerPattern::RGGB, 129,
                                                        4095, shutter)});
    return db;
}

}  // namespace

TEST_SUITE("noise_model") {

TEST_CASE("shot noise of zero signal is zero") {
    Rng rng(1);
    const std::vector<double> zeros(1000, 0.0);
    for (double v : shot_noise(zeros, 0.4, rng)) CHECK(v == 0.0);
}

TEST_CASE("shot noise moments at signal 400, K 0.4") {
    Rng rng(2);
    const std::vector<double> signal(1000000, 400.0);
    const Moments m = moments(shot_noise(signal, 0.4, rng));
    CHECK(std::abs(m.mean / 400.0 - 1) < 0.01);
    CHECK(std::abs(m.var / 160.0 - 1) < 0.03);
}

TEST_CASE("shot noise moments below the normal-approximation threshold") {
    Rng rng(3);
    const std::vector<double> signal(400000, 4.0);  // lambda = 10
    const Moments m = moments(shot_noise(signal, 0.4, rng));
    CHECK(std::abs(m.mean / 4.0 - 1) < 0.01);
    CHECK(std::abs(m.var / 1.6 - 1) < 0.03);
}

TEST_CASE("vanishing system gain leaves the signal intact") {
    Rng rng(4);
    const std::vector<double> signal(10000, 400.0);
    for (double v : shot_noise(signal, 1e-6, rng)) CHECK(std::abs(v / 400.0 - 1) < 1e-3);
}

TEST_CASE("shot noise rejects negative signal") {
    Rng rng(5);
    const std::vector<double> bad = {1.0, -0.5};
    CHECK_ERROR_CODE(shot_noise(bad, 0.4, rng), ErrorCode::NegativeSignal);
}

TEST_CASE("bias sampling") {
    Rng rng(6);
    const BiasFrameDB one = tagged_db(1, 8, 8, 1e-4);
    for (int i = 0; i < 20; ++i) CHECK(sample_bias(one, 1e-4, {0, 0, 8, 8}, rng).frame_index == 0);
    CHECK(sample_bias(one, 1e-4, {0, 0, 8, 8}, rng).patch == one.bucket(1e-4)[0].frame);

    const BiasFrameDB four = tagged_db(4, 8, 8, 1e-4);
    std::array<int, 4> hits{};
    for (int i = 0; i < 10000; ++i) {
        const BiasPatch p = sample_bias(four, 1e-4, {2, 2, 4, 4}, rng);
        CHECK(p.patch.data[0] == 129 + p.frame_index);
        ++hits[p.frame_index];
    }
    for (int h : hits) CHECK(std::abs(h - 2500) <= 150);

    CHECK_ERROR_CODE(sample_bias(four, 1e-4, {6, 0, 4, 4}, rng), ErrorCode::CropOutOfBounds);
    CHECK_ERROR_CODE(sample_bias(four, 2e-4, {0, 0, 4, 4}, rng), ErrorCode::UnknownShutter);
}

TEST_CASE("identity synthesis") {
    Rng src(7);
    RawFrame clean = RawFrame::filled(16, 12, 0, BayerPattern::RGGB, 129, 4095);
    for (auto& v : clean.data) v = static_cast<uint16_t>(129 + src.below(3967));
    SynthesisConfig cfg;
    cfg.enable_sd = false;
    cfg.enable_si = false;
    Rng rng(8);
    CHECK(synthesize_noisy(clean, cfg, nullptr, rng).frame == clean);
}

TEST_CASE("black input with bias only reproduces the bias frame") {
    const BiasFrameDB db = scenes::bias_database(16, 16, CameraProfile{}, {}, {1e-4}, 3, 9);
    const RawFrame clean = RawFrame::filled(8, 8, 129, BayerPattern::RGGB, 129, 4095);
    SynthesisConfig cfg;
    cfg.enable_sd = false;
    cfg.shutter_s = 1e-4;
    Rng rng(10);
    const Synthesis s = synthesize_noisy(clean, cfg, &db, rng, 4, 6);
    const auto& bucket = db.bucket(1e-4);
    const auto it = std::find_if(bucket.begin(), bucket.end(), [&](const BiasFrame& b) { return b.id == s.meta.bias_frame_id; });
    REQUIRE(it != bucket.end());
    CHECK(s.frame.data == it->frame.crop(4, 6, 8, 8).data);
}

TEST_CASE("plateau statistics at R 10") {
    const RawFrame clean = RawFrame::filled(200, 200, 129 + 4000, BayerPattern::RGGB, 129, 4095);
    SynthesisConfig cfg;
    cfg.ratio = 10;
    cfg.enable_si = false;
    Rng rng(11);
    std::vector<double> v;
    for (int rep = 0; rep < 5; ++rep)
        for (uint16_t x : synthesize_noisy(clean, cfg, nullptr, rng).frame.data) v.push_back(x - 129.0);
    const Moments m = moments(v);
    CHECK(std::abs(m.mean / 400.0 - 1) < 0.01);
    CHECK(std::abs(m.var / 160.0 - 1) < 0.05);
}

TEST_CASE("synthesis preserves the expectation") {
    // E[out - black] = (clean - black) / R + E[bias - black], checked on a
    // 100x100 plateau averaged over 1000 syntheses.
    const CameraProfile profile;
    scenes::BiasNoise bn;
    bn.pixel_sigma = 3.0;
    bn.row_sigma = 1.0;
    BiasFrameDB db = scenes::bias_database(100, 100, profile, bn, {1e-4}, 4, 12);
    // Shift the pedestal so the bias mean is well away from zero.
    for (auto& b : db.buckets.begin()->second)
        for (auto& v : b.frame.data) v = static_cast<uint16_t>(v + 20);
    double bias_mean = 0;
    for (const auto& b : db.bucket(1e-4))
        for (uint16_t v : b.frame.data) bias_mean += v - 129.0;
    bias_mean /= 4.0 * 100 * 100;

    const RawFrame clean = RawFrame::filled(100, 100, 129 + 1200, BayerPattern::RGGB, 129, 4095);
    SynthesisConfig cfg;
    cfg.ratio = 4;
    cfg.shutter_s = 1e-4;
    Rng rng(13);
    double total = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r)
        for (uint16_t v : synthesize_noisy(clean, cfg, &db, rng).frame.data) total += v - 129.0;
    const double measured = total / (reps * 100.0 * 100.0);
    const double expected = 1200.0 / 4 + bias_mean;
    CHECK(std::abs(measured / expected - 1) < 0.02);
}

TEST_CASE("gain-compensated noise energy grows with R") {
    const CameraProfile profile;
    const BiasFrameDB db = scenes::bias_database(64, 64, profile, {}, {1e-4}, 4, 14);
    const RawFrame clean = RawFrame::filled(64, 64, 129 + 2000, BayerPattern::RGGB, 129, 4095);
    double previous = 0;
    for (double r : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        SynthesisConfig cfg;
        cfg.ratio = r;
        cfg.shutter_s = 1e-4;
        Rng rng(15);
        std::vector<double> v;
        for (int rep = 0; rep < 8; ++rep)
            for (uint16_t x : synthesize_noisy(clean, cfg, &db, rng).frame.data) v.push_back((x - 129.0) * r);
        const double energy = moments(v).var;
        CHECK(energy >= previous);
        previous = energy;
    }
}

TEST_CASE("synthesis errors") {
    const RawFrame clean = RawFrame::filled(8, 8, 500, BayerPattern::RGGB, 129, 4095);
    SynthesisConfig cfg;
    Rng rng(16);
    cfg.ratio = 0.5;
    CHECK_ERROR_CODE(synthesize_noisy(clean, cfg, nullptr, rng), ErrorCode::InvariantViolation);
    cfg.ratio = 1;
    cfg.shutter_s = 1e-4;
    const BiasFrameDB db = tagged_db(2, 8, 8, 1e-4);
    CHECK_ERROR_CODE(synthesize_noisy(clean, cfg, &db, rng, 2, 0), ErrorCode::DimensionMismatch);
    const BiasFrameDB big = tagged_db(2, 16, 16, 1e-4);
    CHECK_ERROR_CODE(synthesize_noisy(clean, cfg, &big, rng, 1, 0), ErrorCode::DimensionMismatch);
    CHECK_NOTHROW(synthesize_noisy(clean, cfg, &big, rng, 8, 8));
    cfg.shutter_s = 3e-4;
    CHECK_ERROR_CODE(synthesize_noisy(clean, cfg, &big, rng), ErrorCode::UnknownShutter);
}

TEST_CASE("synthesis metadata") {
    const RawFrame clean = RawFrame::filled(8, 8, 500, BayerPattern::RGGB, 129, 4095);
    SynthesisConfig cfg;
    cfg.ratio = 8;
    cfg.shutter_s = 1e-4;
    cfg.seed = 77;
    const BiasFrameDB db = tagged_db(3, 8, 8, 1e-4);
    Rng rng(17);
    const auto j = to_json(synthesize_noisy(clean, cfg, &db, rng).meta);
    CHECK(j.at("R").get<double>() == 8.0);
    CHECK(j.at("K").get<double>() == 0.4);
    CHECK(j.at("seed").get<uint64_t>() == 77);
    CHECK(j.at("bias_frame_id").get<std::string>().rfind("b", 0) == 0);
}

TEST_CASE("synthesis config JSON") {
    SynthesisConfig c;
    c.ratio = 8;
    c.system_gain = 0.2;
    c.enable_si = false;
    c.shutter_s = 1e-4;
    c.seed = 77;
    const SynthesisConfig back = synthesis_config_from_json(to_json(c));
    CHECK(back.ratio == 8);
    CHECK(back.system_gain == 0.2);
    CHECK(back.enable_sd);
    CHECK_FALSE(back.enable_si);
    CHECK(back.shutter_s == 1e-4);
    CHECK(back.seed == 77);
    CHECK(synthesis_config_from_json({{"ratio", 4}}, c).seed == 77);
}

TEST_CASE("system gain recovery from flats") {
    const CameraProfile profile;
    for (double k : {0.4, 0.8}) {
        Rng rng(18);
        std::vector<std::vector<RawFrame>> levels;
        for (double level : {200.0, 800.0, 2000.0}) levels.push_back(scenes::flat_burst(64, 64, level, k, 16, profile, rng));
        CHECK(std::abs(estimate_system_gain(levels) / k - 1) < 0.03);
    }
}

TEST_CASE("system gain estimation errors") {
    const CameraProfile profile;
    std::vector<std::vector<RawFrame>> flat_noiseless;
    for (uint16_t level : {300, 900})
        flat_noiseless.push_back(std::vector<RawFrame>(4, RawFrame::filled(8, 8, level, profile.pattern, 129, 4095)));
    CHECK_ERROR_CODE(estimate_system_gain(flat_noiseless), ErrorCode::NonPositiveSlope);

    std::vector<std::vector<RawFrame>> one_level(1, flat_noiseless[0]);
    CHECK_ERROR_CODE(estimate_system_gain(one_level), ErrorCode::InsufficientData);

    std::vector<std::vector<RawFrame>> short_burst = flat_noiseless;
    short_burst[1].resize(1);
    CHECK_ERROR_CODE(estimate_system_gain(short_burst), ErrorCode::InsufficientData);
}

}  // TEST_SUITE
