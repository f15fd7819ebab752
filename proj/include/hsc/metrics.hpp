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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsc/image.hpp"

namespace hsc {

struct MetricConfig {
    double peak = 1.0;
    int ssim_window = 11;
    double ssim_sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double psnr_cap = 100.0;

    void validate() const;
};

/// Interleaved multi-channel plane of doubles, the common input of the metrics.
struct MetricImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;

    double at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * channels + c]; }
};

MetricImage as_metric_image(const LinearImage& img);
MetricImage as_metric_image(const RgbImage8& img);  // values 0..255
/// Black-subtracted counts (may go negative); use peak = white - black.
MetricImage as_metric_image(const RawFrame& frame);

double psnr(const MetricImage& a, const MetricImage& b, const MetricConfig& cfg);

/// Normalized 2-D Gaussian window, row-major side x side.
std::vector<double> gaussian_window(int side, double sigma);

/// Mean SSIM over every fully contained window position; channels are
/// averaged.
double ssim(const MetricImage& a, const MetricImage& b, const MetricConfig& cfg);

enum class MetricSpace { Raw, Rgb };

struct ImageScore {
    std::string name;
    double psnr = 0.0;
    double ssim = 0.0;
};

struct EvalReport {
    MetricSpace space = MetricSpace::Raw;
    std::vector<ImageScore> images;
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

/// Pairs files by name (.hsrw for raw, .ppm for rgb). Raw metrics use peak
/// white - black; RGB metrics use peak 255. cfg.peak is ignored.
EvalReport eval_report(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir, MetricSpace space,
                       const MetricConfig& cfg = {});

}  // namespace hsc
