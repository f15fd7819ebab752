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


#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"

#include "hsc/io.hpp"
#include "hsc/metrics.hpp"

using namespace hsc;
using hsc::test::TempDir;

using hsc::oracle::random_image;

TEST_SUITE("metrics") {

TEST_CASE("psnr closed forms") {
    MetricConfig cfg;
    const MetricImage a{4, 4, 3, std::vector<double>(48, 0.5)};
    const MetricImage b{4, 4, 3, std::vector<double>(48, 0.25)};
    CHECK(psnr(a, a, cfg) == cfg.psnr_cap);
    CHECK(psnr(a, b, cfg) == doctest::Approx(10 * std::log10(16.0)).epsilon(1e-14));
    CHECK(std::abs(psnr(a, b, cfg) - 12.0412) < 1e-4);
}

TEST_CASE("psnr matches a per-pixel oracle and is symmetric") {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = 8 + static_cast<int>(rng.below(40)), h = 8 + static_cast<int>(rng.below(40));
        const MetricImage a = random_image(rng, w, h, 3), b = random_image(rng, w, h, 3);
        MetricConfig cfg;
        CHECK(std::abs(psnr(a, b, cfg) - oracle::psnr(a, b, 1.0)) < 1e-9);
        CHECK(psnr(a, b, cfg) == psnr(b, a, cfg));
    }
}

TEST_CASE("psnr falls as noise grows") {
    Rng rng(2);
    const MetricImage a = random_image(rng, 32, 32, 1);
    const MetricImage z = random_image(rng, 32, 32, 1);
    MetricConfig cfg;
    double prev = 1e9;
    for (double amp : {0.01, 0.02, 0.05, 0.1, 0.2}) {
        MetricImage b = a;
        for (size_t i = 0; i < b.data.size(); ++i) b.data[i] += amp * (z.data[i] - 0.5);
        const double p = psnr(a, b, cfg);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("ssim identity and constant images") {
    Rng rng(3);
    MetricConfig cfg;
    const MetricImage a = random_image(rng, 20, 17, 3);
    CHECK(std::abs(ssim(a, a, cfg) - 1.0) < 1e-9);

    const MetricImage ca{16, 16, 1, std::vector<double>(256, 0.8)};
    const MetricImage cb{16, 16, 1, std::vector<double>(256, 0.4)};
    const double c1 = 1e-4;
    const double expected = (2 * 0.32 + c1) / (0.8 + c1);
    CHECK(std::abs(ssim(ca, cb, cfg) - expected) < 1e-12);
    CHECK(std::abs(expected - 0.8001) < 1e-4);
}

TEST_CASE("ssim matches a direct sliding-window oracle") {
    Rng rng(4);
    MetricConfig cfg;
    const MetricImage a = random_image(rng, 16, 16, 1);
    MetricImage b = a;
    for (double& v : b.data) v = 0.7 * v + 0.3 * rng.uniform();
    CHECK(std::abs(ssim(a, b, cfg) - oracle::ssim(a, b, 1.0)) < 1e-7);

    MetricConfig c255;
    c255.peak = 255;
    const MetricImage x = random_image(rng, 23, 19, 3, 255.0), y = random_image(rng, 23, 19, 3, 255.0);
    CHECK(std::abs(ssim(x, y, c255) - oracle::ssim(x, y, 255.0)) < 1e-7);
}

TEST_CASE("ssim rejects images smaller than the window") {
    MetricConfig cfg;
    const MetricImage small{10, 30, 1, std::vector<double>(300, 0.1)};
    CHECK_ERROR_CODE(ssim(small, small, cfg), ErrorCode::ImageTooSmall);
    const MetricImage other{30, 10, 1, std::vector<double>(300, 0.1)};
    CHECK_ERROR_CODE(psnr(small, other, cfg), ErrorCode::DimensionMismatch);
}

TEST_CASE("gaussian window is normalised and symmetric") {
    const auto w = gaussian_window(11, 1.5);
    double s = 0;
    for (double v : w) s += v;
    CHECK(std::abs(s - 1.0) < 1e-12);
    CHECK(w[0] == w[120]);
    CHECK(w[5 * 11 + 5] > w[5 * 11 + 4]);
}

TEST_CASE("raw metric images subtract black") {
    RawFrame f = RawFrame::filled(2, 2, 129, BayerPattern::RGGB, 129, 4095);
    f.data[3] = 4095;
    const MetricImage m = as_metric_image(f);
    CHECK(m.channels == 1);
    CHECK(m.data[0] == 0.0);
    CHECK(m.data[3] == 3966.0);
}

TEST_CASE("evaluation report over directories") {
    TempDir pred("eval_pred"), gt("eval_gt");
    Rng rng(5);
    std::vector<double> psnrs, ssims;
    for (int i = 0; i < 3; ++i) {
        RgbImage8 g(16, 16), p(16, 16);
        for (size_t k = 0; k < g.data.size(); ++k) {
            g.data[k] = static_cast<uint8_t>(rng.below(256));
            p.data[k] = static_cast<uint8_t>(std::clamp<int>(g.data[k] + static_cast<int>(rng.below(21)) - 10, 0, 255));
        }
        const std::string name = "img" + std::to_string(i) + ".ppm";
        write_ppm(g, gt.path() / name);
        write_ppm(p, pred.path() / name);
        MetricConfig c;
        c.peak = 255;
        psnrs.push_back(psnr(as_metric_image(p), as_metric_image(g), c));
        ssims.push_back(ssim(as_metric_image(p), as_metric_image(g), c));
    }
    const EvalReport r = eval_report(pred.path(), gt.path(), MetricSpace::Rgb);
    REQUIRE(r.images.size() == 3);
    CHECK(r.mean_psnr == doctest::Approx((psnrs[0] + psnrs[1] + psnrs[2]) / 3).epsilon(1e-14));
    CHECK(r.mean_ssim == doctest::Approx((ssims[0] + ssims[1] + ssims[2]) / 3).epsilon(1e-14));
    CHECK(r.to_json().at("images").size() == 3);
    CHECK(r.to_csv().rfind("name,psnr,ssim\n", 0) == 0);

    const EvalReport same = eval_report(gt.path(), gt.path(), MetricSpace::Rgb);
    CHECK(same.mean_psnr == 100.0);
    CHECK(std::abs(same.mean_ssim - 1.0) < 1e-12);

    std::filesystem::remove(pred.path() / "img1.ppm");
    bool named = false;
    try {
        eval_report(pred.path(), gt.path(), MetricSpace::Rgb);
    } catch (const Error& e) {
        named = e.code() == ErrorCode::MissingPair && std::string(e.what()).find("img1.ppm") != std::string::npos;
    }
    CHECK(named);
}

TEST_CASE("raw evaluation uses the white-minus-black peak") {
    TempDir pred("raw_pred"), gt("raw_gt");
    RawFrame g = RawFrame::filled(16, 16, 1000, BayerPattern::RGGB, 129, 4095);
    RawFrame p = g;
    for (size_t i = 0; i < p.data.size(); i += 2) p.data[i] = 1010;
    write_raw(g, gt.path() / "a.hsrw");
    write_raw(p, pred.path() / "a.hsrw");
    const EvalReport r = eval_report(pred.path(), gt.path(), MetricSpace::Raw);
    CHECK(r.mean_psnr == doctest::Approx(10 * std::log10(3966.0 * 3966.0 / 50.0)).epsilon(1e-12));
}

}  // TEST_SUITE
