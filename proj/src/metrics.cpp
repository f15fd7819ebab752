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

#include "hsc/metrics.hpp"

#include <cmath>
#include <sstream>

#include "hsc/error.hpp"
#include "hsc/io.hpp"

namespace hsc {

namespace fs = std::filesystem;

void MetricConfig::validate() const {
    require(peak > 0, ErrorCode::InvariantViolation, "metric peak must be positive");
    require(ssim_window >= 3 && ssim_window % 2 == 1, ErrorCode::InvariantViolation, "SSIM window must be odd and >= 3");
    require(ssim_sigma > 0 && k1 > 0 && k2 > 0, ErrorCode::InvariantViolation, "SSIM sigma/k1/k2 must be positive");
}

MetricImage as_metric_image(const LinearImage& img) { return {img.width, img.height, 3, img.data}; }

MetricImage as_metric_image(const RgbImage8& img) {
    return {img.width, img.height, 3, std::vector<double>(img.data.begin(), img.data.end())};
}

MetricImage as_metric_image(const RawFrame& frame) {
    MetricImage m{frame.width, frame.height, 1, std::vector<double>(frame.data.size())};
    for (size_t i = 0; i < frame.data.size(); ++i) m.data[i] = static_cast<double>(frame.data[i]) - frame.black_level;
    return m;
}

namespace {
void check_same_shape(const MetricImage& a, const MetricImage& b) {
    require(a.width == b.width && a.height == b.height && a.channels == b.channels, ErrorCode::DimensionMismatch,
            "images differ in shape");
    require(a.data.size() == static_cast<size_t>(a.width) * a.height * a.channels, ErrorCode::InvariantViolation,
            "metric image data length mismatch");
}
}  // namespace

double psnr(const MetricImage& a, const MetricImage& b, const MetricConfig& cfg) {
    check_same_shape(a, b);
    require(cfg.peak > 0, ErrorCode::InvariantViolation, "metric peak must be positive");
    double sse = 0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sse += d * d;
    }
    const double mse = sse / static_cast<double>(a.data.size());
    if (mse == 0) return cfg.psnr_cap;
    return 10.0 * std::log10(cfg.peak * cfg.peak / mse);
}

namespace {
std::vector<double> gaussian_1d(int side, double sigma) {
    std::vector<double> g(static_cast<size_t>(side));
    const int r = side / 2;
    double s = 0;
    for (int i = 0; i < side; ++i) {
        g[i] = std::exp(-0.5 * (i - r) * (i - r) / (sigma * sigma));
        s += g[i];
    }
    for (double& v : g) v /= s;
    return g;
}
}  // namespace

std::vector<double> gaussian_window(int side, double sigma) {
    const std::vector<double> g = gaussian_1d(side, sigma);
    std::vector<double> w(static_cast<size_t>(side) * side);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) w[static_cast<size_t>(y) * side + x] = g[y] * g[x];
    return w;
}

double ssim(const MetricImage& a, const MetricImage& b, const MetricConfig& cfg) {
    check_same_shape(a, b);
    cfg.validate();
    const int side = cfg.ssim_window;
    require(std::min(a.width, a.height) >= side, ErrorCode::ImageTooSmall,
            "image smaller than the " + std::to_string(side) + "px SSIM window");

    // Separable Gaussian filtering of x, y, x^2, y^2, xy over valid positions.
    const std::vector<double> g = gaussian_1d(side, cfg.ssim_sigma);
    const int ow = a.width - side + 1, oh = a.height - side + 1;
    const double c1 = (cfg.k1 * cfg.peak) * (cfg.k1 * cfg.peak);
    const double c2 = (cfg.k2 * cfg.peak) * (cfg.k2 * cfg.peak);

    double total = 0;
    for (int c = 0; c < a.channels; ++c) {
        // Horizontal pass: 5 moment planes of size a.height x ow.
        std::vector<double> h(static_cast<size_t>(5) * a.height * ow, 0.0);
        auto hp = [&](int k, int y, int x) -> double& { return h[(static_cast<size_t>(k) * a.height + y) * ow + x]; };
        for (int y = 0; y < a.height; ++y) {
            for (int x = 0; x < ow; ++x) {
                double m[5] = {0, 0, 0, 0, 0};
                for (int i = 0; i < side; ++i) {
                    const double va = a.at(x + i, y, c), vb = b.at(x + i, y, c);
                    m[0] += g[i] * va;
                    m[1] += g[i] * vb;
                    m[2] += g[i] * va * va;
                    m[3] += g[i] * vb * vb;
                    m[4] += g[i] * va * vb;
                }
                for (int k = 0; k < 5; ++k) hp(k, y, x) = m[k];
            }
        }
        double channel_sum = 0;
        for (int y = 0; y < oh; ++y) {
            for (int x = 0; x < ow; ++x) {
                double m[5] = {0, 0, 0, 0, 0};
                for (int i = 0; i < side; ++i)
                    for (int k = 0; k < 5; ++k) m[k] += g[i] * hp(k, y + i, x);
                const double mu_a = m[0], mu_b = m[1];
                const double var_a = m[2] - mu_a * mu_a;
                const double var_b = m[3] - mu_b * mu_b;
                const double cov = m[4] - mu_a * mu_b;
                channel_sum += ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
                               ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
            }
        }
        total += channel_sum / (static_cast<double>(ow) * oh);
    }
    return total / a.channels;
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j;
    j["space"] = space == MetricSpace::Raw ? "raw" : "rgb";
    j["images"] = nlohmann::json::array();
    for (const ImageScore& s : images) j["images"].push_back({{"name", s.name}, {"psnr", s.psnr}, {"ssim", s.ssim}});
    j["mean_psnr"] = mean_psnr;
    j["mean_ssim"] = mean_ssim;
    return j;
}

std::string EvalReport::to_csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "name,psnr,ssim\n";
    for (const ImageScore& s : images) os << s.name << ',' << s.psnr << ',' << s.ssim << '\n';
    os << "MEAN," << mean_psnr << ',' << mean_ssim << '\n';
    return os.str();
}

EvalReport eval_report(const fs::path& pred_dir, const fs::path& gt_dir, MetricSpace space, const MetricConfig& cfg) {
    const std::string ext = space == MetricSpace::Raw ? ".hsrw" : ".ppm";
    const auto preds = list_files(pred_dir, ext);
    const auto gts = list_files(gt_dir, ext);
    require(!preds.empty(), ErrorCode::EmptyInput, "no " + ext + " files in " + pred_dir.string());

    for (const auto& gt : gts)
        require(fs::exists(pred_dir / gt.filename()), ErrorCode::MissingPair,
                "no prediction for " + gt.filename().string());

    EvalReport report;
    report.space = space;
    for (const auto& pred : preds) {
        const fs::path gt = gt_dir / pred.filename();
        require(fs::exists(gt), ErrorCode::MissingPair, "no ground truth for " + pred.filename().string());
        MetricConfig c = cfg;
        MetricImage a, b;
        if (space == MetricSpace::Raw) {
            const RawFrame fp = read_raw(pred), fg = read_raw(gt);
            c.peak = fg.range();
            a = as_metric_image(fp);
            b = as_metric_image(fg);
        } else {
            c.peak = 255.0;
            a = as_metric_image(read_ppm(pred));
            b = as_metric_image(read_ppm(gt));
        }
        report.images.push_back({pred.filename().string(), psnr(a, b, c), ssim(a, b, c)});
    }
    for (const ImageScore& s : report.images) {
        report.mean_psnr += s.psnr;
        report.mean_ssim += s.ssim;
    }
    report.mean_psnr /= static_cast<double>(report.images.size());
    report.mean_ssim /= static_cast<double>(report.images.size());
    return report;
}

}  // namespace hsc
