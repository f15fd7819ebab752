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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsc/image.hpp"
#include "hsc/inverse_isp.hpp"
#include "hsc/nn/model.hpp"
#include "hsc/nn/optim.hpp"
#include "hsc/noise_model.hpp"

namespace hsc {

enum class LossKind { L1, L2 };

const char* to_string(LossKind loss);
LossKind parse_loss_kind(const std::string& s);

struct TrainConfig {
    int64_t steps = 2000;
    double lr0 = 2e-4;
    double lr_min = 0.0;
    int batch = 1;
    int crop = 64;
    bool flips = true;
    uint64_t seed = 0;
    int64_t val_every = 200;
    LossKind loss = LossKind::L1;
    double val_fraction = 0.15;
    // Stop early (exclusive step index) without changing the schedule; used
    // to checkpoint mid-run and resume. Negative means run to the end.
    int64_t stop_at = -1;

    void validate() const;
};

nlohmann::json to_json(const TrainConfig& cfg);
/// Missing keys keep the values from `defaults`.
TrainConfig train_config_from_json(const nlohmann::json& j, const TrainConfig& defaults = {});

struct TrainLogEntry {
    int64_t step = 0;
    double lr = 0.0;
    double loss = 0.0;
    std::optional<double> val_psnr;
};

nlohmann::json to_json(const TrainLogEntry& e);
std::string to_jsonl(std::span<const TrainLogEntry> log);

/// Optional resume point: weights, optimizer moments and the next step index.
struct TrainState {
    nn::ConvNet<float> model;
    nn::AdamState<float> optimizer;
    int64_t step = 0;
};

struct TrainResult {
    TrainState state;
    std::vector<TrainLogEntry> log;
    std::vector<size_t> train_indices;
    std::vector<size_t> val_indices;
    // Validation PSNR of the untrained reference (gain baseline for the
    // denoiser); NaN when there is no validation split.
    double reference_val_psnr = 0.0;
};

struct Split {
    std::vector<size_t> train;
    std::vector<size_t> val;
};

/// Seeded shuffle; round(n * fraction) items held out, at least one when
/// n >= 2 and fraction > 0, never all of them.
Split holdout_split(size_t n, double fraction, uint64_t seed);

/// (raw - black) / (white - black) * scale, packed into a 1x4x(H/2)x(W/2)
/// tensor with channels (R, G1, G2, B); G1 precedes G2 in raster order.
nn::Tensor4<float> pack_bayer(const RawFrame& frame, double scale = 1.0);

/// Inverse of pack_bayer at scale 1 (batch item `n`): rounds to the nearest
/// count and clamps to [0, white]; metadata comes from `like`.
RawFrame unpack_bayer(const nn::Tensor4<float>& t, const RawFrame& like, int n = 0);

/// In-place mirror of every plane along x / along y.
void flip_horizontal(nn::Tensor4<float>& t);
void flip_vertical(nn::Tensor4<float>& t);

/// (noisy - black) * R + black, clamped to [0, white].
RawFrame gain_baseline(const RawFrame& noisy, double ratio);

/// Bilinear demosaic of the normalized frame followed by white balance.
LinearImage preprocess_for_isp(const RawFrame& frame, WbGains gains);

struct PairedDataset {
    std::vector<RawFrame> scenes;           // clean long-exposure targets
    const BiasFrameDB* bias_db = nullptr;   // required when SI is enabled
};

struct IspPair {
    RawFrame raw;
    WbGains gains;
    RgbImage8 target;
};

using LogSink = std::function<void(const TrainLogEntry&)>;

/// Denoiser input is the packed noisy frame amplified by R, so the residual
/// identity reproduces gain_baseline.
RawFrame run_denoiser(const nn::ConvNet<float>& denoiser, const RawFrame& noisy, double ratio);
RgbImage8 run_mini_isp(const nn::ConvNet<float>& mini_isp, const LinearImage& preprocessed);

TrainResult train_denoiser(const PairedDataset& data, const SynthesisConfig& noise, nn::ConvNet<float> model,
                           const TrainConfig& cfg, const TrainState* resume = nullptr, const LogSink& sink = {});

TrainResult train_mini_isp(std::span<const IspPair> pairs, nn::ConvNet<float> model, const TrainConfig& cfg,
                           const TrainState* resume = nullptr, const LogSink& sink = {});

/// Mean RGB PSNR (peak 255) of the Mini-ISP over the selected pairs.
double mini_isp_psnr(const nn::ConvNet<float>& mini_isp, std::span<const IspPair> pairs,
                     std::span<const size_t> indices);

RgbImage8 denoise_pipeline(const RawFrame& noisy, double ratio, const nn::ConvNet<float>& denoiser,
                           const nn::ConvNet<float>& mini_isp, WbGains gains);

}  // namespace hsc
