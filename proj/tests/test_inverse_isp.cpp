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
#include <cmath>
#include <map>

#include "doctest.h"
#include "test_util.hpp"

#include "hsc/inverse_isp.hpp"
#include "hsc/scenes.hpp"

using namespace hsc;

namespace {

CameraProfile unit_profile() {
    CameraProfile p;
    p.gamma = 1.0;
    p.wb_red = {1.0, 1.0};
    p.wb_blue = {1.0, 1.0};
    return p;
}

LinearImage random_linear(Rng& rng, int w, int h) {
    LinearImage img(w, h);
    for (double& v : img.data) v = rng.uniform();
    return img;
}

double max_abs_diff(const LinearImage& a, const LinearImage& b) {
    double m = 0;
    for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

}  // namespace

TEST_SUITE("inverse_isp") {

TEST_CASE("dequantize without dither uses bin centres") {
    Rng rng(0);
    RgbImage8 img(2, 2);
    img.data.assign(12, 0);
    img.data[3] = 255;
    const LinearImage lin = dequantize(img, rng, false);
    CHECK(lin.data[0] == 0.5 / 256);
    CHECK(lin.data[0] == doctest::Approx(0.001953125));
    CHECK(lin.data[3] == 255.5 / 256);
}

TEST_CASE("dithered dequantization fills the quantization cell") {
    Rng rng(1);
    RgbImage8 img(1000, 334, 128);
    const LinearImage lin = dequantize(img, rng, true);
    constexpr int sub = 64;
    std::vector<int> hist(sub, 0);
    for (double v : lin.data) {
        REQUIRE(v >= 128.0 / 256);
        REQUIRE(v < 129.0 / 256);
        ++hist[std::min(sub - 1, static_cast<int>((v * 256 - 128) * sub))];
    }
    CHECK(std::count(hist.begin(), hist.end(), 0) == 0);
}

TEST_CASE("gamma curves") {
    LinearImage img(1, 1);
    img.data = {0.5, 1.0, 0.0};
    const LinearImage d = gamma_decompress(img, 3.0);
    CHECK(d.data[0] == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(d.data[1] == 1.0);
    CHECK(d.data[2] == 0.0);
    img.data = {0.125, 1.0, 0.0};
    const LinearImage c = gamma_compress(img, 3.0);
    CHECK(c.data[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.data[1] == 1.0);
    CHECK(gamma_decompress(LinearImage(1, 1, 1.0), 2.2).data[0] == 1.0);

    Rng rng(3);
    const LinearImage r = random_linear(rng, 16, 16);
    CHECK(max_abs_diff(gamma_compress(gamma_decompress(r, 3.0), 3.0), r) < 1e-6);

    LinearImage neg(1, 1);
    neg.data[0] = -0.1;
    CHECK_ERROR_CODE(gamma_decompress(neg, 3.0), ErrorCode::NegativeInput);
    CHECK_ERROR_CODE(gamma_compress(neg, 3.0), ErrorCode::NegativeInput);
}

TEST_CASE("colour correction inversion") {
    LinearImage px(1, 1);
    px.data = {0.4, 0.2, 0.1};
    CHECK(max_abs_diff(invert_ccm(px, identity_mat3()), px) == 0.0);
    const LinearImage half = invert_ccm(px, Mat3{2, 0, 0, 0, 2, 0, 0, 0, 2});
    CHECK(half.data[0] == doctest::Approx(0.2));
    CHECK(half.data[1] == doctest::Approx(0.1));
    CHECK(half.data[2] == doctest::Approx(0.05));

    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        Mat3 m = identity_mat3();
        for (double& v : m) v += rng.uniform(-0.3, 0.3);
        const LinearImage r = random_linear(rng, 8, 8);
        CHECK(max_abs_diff(apply_ccm(invert_ccm(r, m), m), r) < 1e-5);
    }
    CHECK_ERROR_CODE(invert_ccm(px, Mat3{1, 1, 1, 1, 1, 1, 1, 1, 1}), ErrorCode::SingularMatrix);
}

TEST_CASE("white-balance gain sampling") {
    CameraProfile p;
    p.wb_red = {2.0, 2.0};
    p.wb_blue = {2.0, 2.0};
    Rng rng(5);
    const WbGains fixed = sample_wb_gains(p, rng);
    CHECK(fixed.red == 2.0);
    CHECK(fixed.blue == 2.0);

    p.wb_red = {1.5, 2.5};
    p.wb_blue = {1.5, 2.5};
    double lo = 10, hi = 0, sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double g = sample_wb_gains(p, rng).red;
        lo = std::min(lo, g);
        hi = std::max(hi, g);
        sum += g;
    }
    CHECK(lo >= 1.5);
    CHECK(hi < 2.5);
    CHECK(std::abs(sum / n - 2.0) < 0.01);

    Rng a(77), b(77);
    const WbGains ga = sample_wb_gains(p, a), gb = sample_wb_gains(p, b);
    CHECK(ga.red == gb.red);
    CHECK(ga.blue == gb.blue);
}

TEST_CASE("white balance and digital gain inversion") {
    LinearImage px(1, 1);
    px.data = {0.5, 0.5, 0.5};
    CHECK(invert_white_balance(px, {2.0, 1.0}).data[0] == 0.25);
    CHECK(max_abs_diff(invert_white_balance(px, {1.0, 1.0}), px) == 0.0);
    CHECK_ERROR_CODE(invert_white_balance(px, {0.0, 1.0}), ErrorCode::NonPositiveGain);
    CHECK_ERROR_CODE(apply_white_balance(px, {1.0, -1.0}), ErrorCode::NonPositiveGain);

    CHECK(max_abs_diff(invert_gain(px, 1.0), px) == 0.0);
    px.data = {0.8, 0.8, 0.8};
    CHECK(invert_gain(px, 4.0).data[0] == doctest::Approx(0.2));
    CHECK_ERROR_CODE(invert_gain(px, 0.0), ErrorCode::NonPositiveGain);

    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const LinearImage r = random_linear(rng, 8, 8);
        const WbGains g{rng.uniform(1.0, 3.0), rng.uniform(1.0, 3.0)};
        CHECK(max_abs_diff(apply_white_balance(invert_white_balance(r, g), g), r) < 1e-7);
        const double k = rng.uniform(0.5, 8.0);
        CHECK(max_abs_diff(apply_gain(invert_gain(r, k), k), r) < 1e-7);
    }
}

TEST_CASE("mosaic samples the pattern's own channel") {
    CameraProfile p;
    LinearImage red(4, 4);
    for (size_t i = 0; i < red.data.size(); i += 3) red.data[i] = 1.0;
    const RawFrame f = mosaic(red, p);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            CHECK(f.at(x, y) == ((x % 2 == 0 && y % 2 == 0) ? 4095 : 129));

    const RawFrame gray = mosaic(LinearImage(4, 4, 0.5), p);
    for (uint16_t v : gray.data) CHECK(v == 2112);

    CHECK_ERROR_CODE(mosaic(LinearImage(3, 4, 0.5), p), ErrorCode::OddDimensions);

    // Out-of-range values clamp to the black/white levels.
    const RawFrame clipped = mosaic(LinearImage(2, 2, 1.7), p);
    for (uint16_t v : clipped.data) CHECK(v == 4095);
}

TEST_CASE("demosaic of constant and black frames") {
    for (auto pat : {BayerPattern::RGGB, BayerPattern::BGGR, BayerPattern::GRBG, BayerPattern::GBRG}) {
        const RawFrame f = RawFrame::filled(6, 4, 1000, pat, 129, 4095);
        const LinearImage lin = demosaic_bilinear(f);
        for (double v : lin.data) CHECK(v == doctest::Approx((1000.0 - 129) / 3966).epsilon(1e-15));
        const LinearImage zero = demosaic_bilinear(RawFrame::filled(6, 4, 129, pat, 129, 4095));
        for (double v : zero.data) CHECK(v == 0.0);
    }
}

TEST_CASE("demosaic bilinear weights around a single red site") {
    // RGGB: (2,2) is red. Hand-evaluated red channel of its neighbourhood.
    RawFrame f = RawFrame::filled(6, 6, 0, BayerPattern::RGGB, 0, 1000);
    f.at(2, 2) = 800;
    const LinearImage lin = demosaic_bilinear(f);
    const double v = 0.8;
    CHECK(lin.at(2, 2, 0) == v);
    CHECK(lin.at(1, 2, 0) == doctest::Approx(v / 2));  // green in a red row
    CHECK(lin.at(3, 2, 0) == doctest::Approx(v / 2));
    CHECK(lin.at(2, 1, 0) == doctest::Approx(v / 2));  // green in a blue row
    CHECK(lin.at(2, 3, 0) == doctest::Approx(v / 2));
    CHECK(lin.at(1, 1, 0) == doctest::Approx(v / 4));  // blue sites use diagonals
    CHECK(lin.at(3, 3, 0) == doctest::Approx(v / 4));
    CHECK(lin.at(1, 3, 0) == doctest::Approx(v / 4));
    CHECK(lin.at(3, 1, 0) == doctest::Approx(v / 4));
    CHECK(lin.at(0, 2, 0) == 0.0);  // red site elsewhere
    CHECK(lin.at(4, 2, 0) == 0.0);
    CHECK(lin.at(5, 5, 0) == 0.0);
    // Green and blue are untouched by a red-only impulse.
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) {
            CHECK(lin.at(x, y, 1) == 0.0);
            CHECK(lin.at(x, y, 2) == 0.0);
        }
}

TEST_CASE("demosaic of mosaic recovers native samples within a raw step") {
    CameraProfile p;
    Rng rng(8);
    const LinearImage img = random_linear(rng, 10, 8);
    const RawFrame f = mosaic(img, p);
    const LinearImage back = demosaic_bilinear(f);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 10; ++x) {
            const int c = static_cast<int>(channel_at(p.pattern, y, x));
            CHECK(std::abs(back.at(x, y, c) - img.at(x, y, c)) <= 0.5 / 3966 + 1e-12);
        }
}

TEST_CASE("reconstruction with unit parameters is an affine map") {
    ReconstructionConfig cfg;
    cfg.profile = unit_profile();
    cfg.dither = false;
    RgbImage8 img(4, 4);
    for (size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<uint8_t>(i * 5);
    Rng rng(0);
    const Reconstruction rec = reconstruct_long_exposure(img, cfg, rng);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            const int c = static_cast<int>(channel_at(cfg.profile.pattern, y, x));
            const double v = img.at(x, y, c);
            CHECK(rec.frame.at(x, y) == std::lround((v + 0.5) / 256 * 3966) + 129);
        }
    CHECK(rec.meta.gains.red == 1.0);
    CHECK(rec.meta.gains.blue == 1.0);
}

TEST_CASE("reconstruction is deterministic and stays within levels") {
    ReconstructionConfig cfg;
    cfg.profile.ccm = {1.6, -0.4, -0.2, -0.3, 1.5, -0.2, 0.0, -0.5, 1.5};
    Rng src(9);
    const RgbImage8 img = scenes::natural_image(32, 32, src);
    Rng a(10), b(10);
    const Reconstruction ra = reconstruct_long_exposure(img, cfg, a);
    const Reconstruction rb = reconstruct_long_exposure(img, cfg, b);
    CHECK(ra.frame == rb.frame);
    for (uint16_t v : ra.frame.data) {
        CHECK(v >= 129);
        CHECK(v <= 4095);
    }
    CHECK_ERROR_CODE(reconstruct_long_exposure(RgbImage8(3, 4), cfg, a), ErrorCode::OddDimensions);
}

TEST_CASE("reconstruction metadata round-trips through JSON") {
    ReconstructionMeta m;
    m.source_id = "scene_01.ppm";
    m.gains = {1.7, 2.1};
    m.seed = 1234;
    const ReconstructionMeta back = reconstruction_meta_from_json(to_json(m));
    CHECK(back.source_id == m.source_id);
    CHECK(back.gains.red == m.gains.red);
    CHECK(back.gains.blue == m.gains.blue);
    CHECK(back.seed == m.seed);
    CHECK(back.gamma == m.gamma);
}

TEST_CASE("dithered reconstruction fills raw codes without a comb") {
    // Linear profile: one 8-bit step spans ~15.5 raw codes. Without dither
    // every pixel lands on one code; with dither the interior codes of the
    // cell must be filled uniformly (chi-square at p = 0.001).
    ReconstructionConfig cfg;
    cfg.profile = unit_profile();
    const RgbImage8 img(256, 256, 128);
    Rng rng(12);
    const RawFrame dithered = reconstruct_long_exposure(img, cfg, rng).frame;
    cfg.dither = false;
    const RawFrame plain = reconstruct_long_exposure(img, cfg, rng).frame;

    std::map<int, int> plain_hist;
    for (uint16_t v : plain.data) ++plain_hist[v];
    CHECK(plain_hist.size() == 1);

    const double lo = 129 + 128.0 / 256 * 3966, hi = 129 + 129.0 / 256 * 3966;
    std::map<int, int> hist;
    for (uint16_t v : dithered.data) {
        CHECK(v >= std::floor(lo));
        CHECK(v <= std::ceil(hi));
        ++hist[v];
    }
    // Codes whose rounding cell lies fully inside [lo, hi).
    std::vector<int> interior;
    for (int code = static_cast<int>(std::ceil(lo + 0.5)); code + 0.5 <= hi; ++code) interior.push_back(hist[code]);
    REQUIRE(interior.size() == 14);
    double total = 0;
    for (int c : interior) total += c;
    const double expected = total / static_cast<double>(interior.size());
    double chi2 = 0;
    for (int c : interior) {
        CHECK(c > 0);
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // 99.9th percentile of chi-square with 13 degrees of freedom.
    CHECK(chi2 < 34.53);
}

TEST_CASE("forward ISP basics") {
    CameraProfile p = unit_profile();
    const RgbImage8 black = forward_isp(RawFrame::filled(4, 4, 129, p.pattern, 129, 4095), {1, 1}, p);
    for (uint8_t v : black.data) CHECK(v == 0);

    p.gamma = 2.2;
    const RawFrame gray = mosaic(LinearImage(4, 4, 0.5), p);
    const RgbImage8 out = forward_isp(gray, {1, 1}, p);
    const double lin = (2112.0 - 129) / 3966;
    for (uint8_t v : out.data) CHECK(v == std::lround(std::pow(lin, 1 / 2.2) * 255));
    CHECK(std::lround(std::pow(0.5, 1 / 2.2) * 255) == out.data[0]);
}

TEST_CASE("camera profile JSON") {
    CameraProfile p;
    p.ccm = {1.6, -0.4, -0.2, -0.3, 1.5, -0.2, 0.0, -0.5, 1.5};
    p.wb_red = {1.5, 2.0};
    p.gamma = 2.2;
    p.black_level = 64;
    p.white_level = 1023;
    p.bit_depth = 10;
    p.pattern = BayerPattern::GBRG;
    const CameraProfile back = camera_profile_from_json(to_json(p));
    CHECK(back.ccm == p.ccm);
    CHECK(back.wb_red.low == 1.5);
    CHECK(back.wb_red.high == 2.0);
    CHECK(back.gamma == 2.2);
    CHECK(back.black_level == 64);
    CHECK(back.white_level == 1023);
    CHECK(back.pattern == BayerPattern::GBRG);
    CHECK(camera_profile_from_json({{"gamma", 2.0}}).black_level == 129);
    CHECK_ERROR_CODE(camera_profile_from_json({{"ccm", {1, 2, 3}}}), ErrorCode::InvariantViolation);
    CHECK_ERROR_CODE(camera_profile_from_json({{"black_level", 5000}}), ErrorCode::InvariantViolation);
}

TEST_CASE("8-bit round trip holds above the deep shadows") {
    // At gamma 3 the darkest 8-bit codes map below one 12-bit count once WB
    // divides them down, so they cannot come back within 2/255. From code 32
    // up every level survives any dither and any gain in the profile range.
    for (double g : {1.0, 1.4, 2.4}) {
        ReconstructionConfig cfg;
        cfg.profile.wb_red = {g, g};
        cfg.profile.wb_blue = {g, g};
        int worst_lit = 0, worst_dark = 0;
        for (int v = 0; v < 256; ++v) {
            RgbImage8 img(2, 2);
            std::fill(img.data.begin(), img.data.end(), static_cast<uint8_t>(v));
            for (uint64_t seed = 0; seed < 16; ++seed) {
                Rng rng(Rng::derive(static_cast<uint64_t>(v), seed));
                const Reconstruction rec = reconstruct_long_exposure(img, cfg, rng);
                const RgbImage8 out = forward_isp(rec.frame, rec.meta.gains, cfg.profile);
                const int err = std::abs(static_cast<int>(out.at(0, 0, 0)) - v);  // red site of RGGB
                int& worst = v >= 32 ? worst_lit : worst_dark;
                worst = std::max(worst, err);
            }
        }
        CAPTURE(g);
        CHECK(worst_lit <= 2);
        if (g == 2.4) CHECK(worst_dark > 2);
    }
}

}  // TEST_SUITE
