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

#include "hsc/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hsc/error.hpp"
#include "hsc/metrics.hpp"
#include "hsc/nn/layers.hpp"
#include "hsc/rng.hpp"

namespace hsc {

using nn::ConvNet;
using nn::Tensor4;

const char* to_string(LossKind loss) { return loss == LossKind::L1 ? "L1" : "L2"; }

LossKind parse_loss_kind(const std::string& s) {
    if (s == "L1" || s == "l1") return LossKind::L1;
    if (s == "L2" || s == "l2") return LossKind::L2;
    fail(ErrorCode::InvariantViolation, "unknown loss '" + s + "' (expected L1 or L2)");
}

void TrainConfig::validate() const {
    require(steps >= 1, ErrorCode::InvariantViolation, "steps must be >= 1");
    require(crop >= 2 && crop % 2 == 0, ErrorCode::InvariantViolation, "crop must be even and positive");
    require(batch >= 1, ErrorCode::InvariantViolation, "batch must be >= 1");
    require(val_every >= 1, ErrorCode::InvariantViolation, "val_every must be >= 1");
    require(val_fraction >= 0.0 && val_fraction < 1.0, ErrorCode::InvariantViolation,
            "val_fraction must lie in [0, 1)");
    nn::CosineSchedule{lr0, lr_min, steps}.validate();
}

nlohmann::json to_json(const TrainConfig& c) {
    return {{"steps", c.steps},       {"lr0", c.lr0},         {"lr_min", c.lr_min},
            {"batch", c.batch},       {"crop", c.crop},       {"flips", c.flips},
            {"seed", c.seed},         {"val_every", c.val_every}, {"loss", to_string(c.loss)},
            {"val_fraction", c.val_fraction}, {"stop_at", c.stop_at}};
}

TrainConfig train_config_from_json(const nlohmann::json& j, const TrainConfig& defaults) {
    TrainConfig c = defaults;
    c.steps = j.value("steps", c.steps);
    c.lr0 = j.value("lr0", c.lr0);
    c.lr_min = j.value("lr_min", c.lr_min);
    c.batch = j.value("batch", c.batch);
    c.crop = j.value("crop", c.crop);
    c.flips = j.value("flips", c.flips);
    c.seed = j.value("seed", c.seed);
    c.val_every = j.value("val_every", c.val_every);
    if (j.contains("loss")) c.loss = parse_loss_kind(j.at("loss").get<std::string>());
    c.val_fraction = j.value("val_fraction", c.val_fraction);
    c.stop_at = j.value("stop_at", c.stop_at);
    return c;
}

nlohmann::json to_json(const TrainLogEntry& e) {
    nlohmann::json j = {{"step", e.step}, {"lr", e.lr}, {"loss", e.loss}};
    j["val_psnr"] = e.val_psnr ? nlohmann::json(*e.val_psnr) : nlohmann::json(nullptr);
    return j;
}

std::string to_jsonl(std::span<const TrainLogEntry> log) {
    std::string out;
    for (const auto& e : log) out += to_json(e).dump() + "\n";
    return out;
}

Split holdout_split(size_t n, double fraction, uint64_t seed) {
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    Rng rng(Rng::derive(seed, 0x5b1d));
    for (size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    size_t held = static_cast<size_t>(std::llround(static_cast<double>(n) * fraction));
    if (n >= 2 && fraction > 0.0) held = std::clamp<size_t>(held, 1, n - 1);
    else held = 0;
    Split s;
    s.val.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(held));
    s.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(held), idx.end());
    std::sort(s.val.begin(), s.val.end());
    std::sort(s.train.begin(), s.train.end());
    return s;
}

namespace {

// Quad offsets (dx, dy) of R, G1, G2, B for a pattern.
std::array<std::pair<int, int>, 4> quad_layout(BayerPattern p) {
    std::array<std::pair<int, int>, 4> out{};
    int g = 1;
    for (int q = 0; q < 4; ++q) {
        const int dx = q & 1, dy = q >> 1;
        switch (channel_at(p, dy, dx)) {
            case Channel::R: out[0] = {dx, dy}; break;
            case Channel::B: out[3] = {dx, dy}; break;
            case Channel::G: out[g++] = {dx, dy}; break;
        }
    }
    return out;
}

Tensor4<float> concat_batch(const std::vector<Tensor4<float>>& items) {
    Tensor4<float> out(static_cast<int>(items.size()), items[0].c, items[0].h, items[0].w);
    const size_t per = items[0].size();
    for (size_t i = 0; i < items.size(); ++i) std::copy(items[i].data.begin(), items[i].data.end(), out.data.begin() + i * per);
    return out;
}

Tensor4<float> crop_tensor(const Tensor4<float>& t, int x, int y, int w, int h) {
    Tensor4<float> out(1, t.c, h, w);
    for (int c = 0; c < t.c; ++c)
        for (int r = 0; r < h; ++r) {
            const float* src = t.channel(0, c) + static_cast<size_t>(y + r) * t.w + x;
            std::copy(src, src + w, out.channel(0, c) + static_cast<size_t>(r) * w);
        }
    return out;
}

Tensor4<float> linear_to_tensor(const LinearImage& img) {
    Tensor4<float> t(1, 3, img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) t.at(0, c, y, x) = static_cast<float>(img.at(x, y, c));
    return t;
}

Tensor4<float> rgb8_to_tensor(const RgbImage8& img) {
    Tensor4<float> t(1, 3, img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) t.at(0, c, y, x) = static_cast<float>(img.at(x, y, c) / 255.0);
    return t;
}

nn::LossResult<float> compute_loss(LossKind kind, const Tensor4<float>& pred, const Tensor4<float>& target) {
    return kind == LossKind::L1 ? nn::l1_loss(pred, target) : nn::l2_loss(pred, target);
}

// A single crop/flip sample: input and target tensors of identical layout.
struct Sample {
    Tensor4<float> input;
    Tensor4<float> target;
};

using SampleFn = std::function<Sample(Rng&)>;
using ValFn = std::function<double(const ConvNet<float>&)>;

// Shared loop: per-step RNG derived from (seed, step), so a resumed run
// replays the same samples as an uninterrupted one.
TrainResult run_loop(ConvNet<float> model, const TrainConfig& cfg, const TrainState* resume,
                     const SampleFn& sample, const ValFn& validate, const LogSink& sink) {
    cfg.validate();
    TrainResult result;
    result.state.model = std::move(model);
    if (resume) {
        require(resume->model.architecture() == result.state.model.architecture(), ErrorCode::ArchMismatch,
                "resume checkpoint architecture differs from the model");
        require(resume->step >= 0 && resume->step <= cfg.steps, ErrorCode::StepOutOfRange,
                "resume step outside [0, steps]");
        result.state = *resume;
    }
    const nn::CosineSchedule schedule{cfg.lr0, cfg.lr_min, cfg.steps};
    const int64_t end = cfg.stop_at >= 0 ? std::min(cfg.stop_at, cfg.steps) : cfg.steps;

    for (int64_t t = result.state.step; t < end; ++t) {
        Rng rng(Rng::derive(cfg.seed, static_cast<uint64_t>(t)));
        std::vector<Tensor4<float>> inputs, targets;
        for (int b = 0; b < cfg.batch; ++b) {
            Sample s = sample(rng);
            if (cfg.flips) {
                if (rng.uniform() < 0.5) {
                    flip_horizontal(s.input);
                    flip_horizontal(s.target);
                }
                if (rng.uniform() < 0.5) {
                    flip_vertical(s.input);
                    flip_vertical(s.target);
                }
            }
            inputs.push_back(std::move(s.input));
            targets.push_back(std::move(s.target));
        }
        const Tensor4<float> x = concat_batch(inputs);
        const Tensor4<float> y = concat_batch(targets);

        ConvNet<float>::Cache cache;
        const Tensor4<float> pred = result.state.model.forward(x, &cache);
        const auto loss = compute_loss(cfg.loss, pred, y);
        const double lr = nn::cosine_lr(schedule, t);
        if (!std::isfinite(loss.value)) {
            std::ostringstream msg;
            msg << "non-finite loss at step " << t << " (lr " << lr << ", batch " << cfg.batch << ")";
            fail(ErrorCode::NonFiniteLoss, msg.str());
        }
        const auto grads = result.state.model.backward(cache, loss.grad);
        std::vector<std::span<const float>> grad_views(grads.begin(), grads.end());
        const auto params = result.state.model.parameters();
        nn::adam_step<float>(params, grad_views, result.state.optimizer, lr);
        result.state.step = t + 1;

        TrainLogEntry entry{t, lr, loss.value, std::nullopt};
        if (validate && ((t + 1) % cfg.val_every == 0 || t + 1 == cfg.steps))
            entry.val_psnr = validate(result.state.model);
        if (sink) sink(entry);
        result.log.push_back(entry);
    }
    return result;
}

}  // namespace

void flip_horizontal(Tensor4<float>& t) {
    for (int n = 0; n < t.n; ++n)
        for (int c = 0; c < t.c; ++c)
            for (int y = 0; y < t.h; ++y) {
                float* row = t.channel(n, c) + static_cast<size_t>(y) * t.w;
                std::reverse(row, row + t.w);
            }
}

void flip_vertical(Tensor4<float>& t) {
    for (int n = 0; n < t.n; ++n)
        for (int c = 0; c < t.c; ++c) {
            float* plane = t.channel(n, c);
            for (int y = 0; y < t.h / 2; ++y)
                std::swap_ranges(plane + static_cast<size_t>(y) * t.w, plane + static_cast<size_t>(y + 1) * t.w,
                                 plane + static_cast<size_t>(t.h - 1 - y) * t.w);
        }
}

Tensor4<float> pack_bayer(const RawFrame& frame, double scale) {
    require(frame.width % 2 == 0 && frame.height % 2 == 0, ErrorCode::OddDimensions,
            "packing needs even dimensions, got " + std::to_string(frame.width) + "x" + std::to_string(frame.height));
    frame.validate();
    const auto layout = quad_layout(frame.pattern);
    const int hw = frame.width / 2, hh = frame.height / 2;
    const double black = frame.black_level, inv = scale / frame.range();
    Tensor4<float> t(1, 4, hh, hw);
    for (int c = 0; c < 4; ++c) {
        const auto [dx, dy] = layout[c];
        float* plane = t.channel(0, c);
        for (int y = 0; y < hh; ++y)
            for (int x = 0; x < hw; ++x)
                plane[static_cast<size_t>(y) * hw + x] =
                    static_cast<float>((frame.at(2 * x + dx, 2 * y + dy) - black) * inv);
    }
    return t;
}

RawFrame unpack_bayer(const Tensor4<float>& t, const RawFrame& like, int n) {
    require(like.width % 2 == 0 && like.height % 2 == 0, ErrorCode::OddDimensions, "frame dimensions must be even");
    require(t.c == 4 && t.w * 2 == like.width && t.h * 2 == like.height && n >= 0 && n < t.n,
            ErrorCode::ShapeMismatch, "packed tensor does not match the frame geometry");
    RawFrame out = like;
    out.data.assign(static_cast<size_t>(like.width) * like.height, 0);
    const auto layout = quad_layout(like.pattern);
    const double black = like.black_level, range = like.range(), white = like.white_level;
    for (int c = 0; c < 4; ++c) {
        const auto [dx, dy] = layout[c];
        const float* plane = t.channel(n, c);
        for (int y = 0; y < t.h; ++y)
            for (int x = 0; x < t.w; ++x) {
                const double v = std::round(static_cast<double>(plane[static_cast<size_t>(y) * t.w + x]) * range + black);
                out.at(2 * x + dx, 2 * y + dy) = static_cast<uint16_t>(std::isfinite(v) ? std::clamp(v, 0.0, white) : 0.0);
            }
    }
    return out;
}

RawFrame gain_baseline(const RawFrame& noisy, double ratio) {
    require(ratio >= 1.0, ErrorCode::InvariantViolation, "ratio must be >= 1");
    RawFrame out = noisy;
    const double black = noisy.black_level, white = noisy.white_level;
    for (uint16_t& v : out.data) v = static_cast<uint16_t>(std::clamp(std::round((v - black) * ratio + black), 0.0, white));
    return out;
}

LinearImage preprocess_for_isp(const RawFrame& frame, WbGains gains) {
    return apply_white_balance(demosaic_bilinear(frame), gains);
}

RawFrame run_denoiser(const ConvNet<float>& denoiser, const RawFrame& noisy, double ratio) {
    require(ratio >= 1.0, ErrorCode::InvariantViolation, "ratio must be >= 1");
    return unpack_bayer(denoiser.forward(pack_bayer(noisy, ratio)), noisy);
}

RgbImage8 run_mini_isp(const ConvNet<float>& mini_isp, const LinearImage& preprocessed) {
    const Tensor4<float> out = mini_isp.forward(linear_to_tensor(preprocessed));
    RgbImage8 img(preprocessed.width, preprocessed.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) {
                const double v = out.at(0, c, y, x);
                img.at(x, y, c) = static_cast<uint8_t>(std::isfinite(v) ? std::lround(std::clamp(v, 0.0, 1.0) * 255.0) : 0);
            }
    return img;
}

TrainResult train_denoiser(const PairedDataset& data, const SynthesisConfig& noise, ConvNet<float> model,
                           const TrainConfig& cfg, const TrainState* resume, const LogSink& sink) {
    cfg.validate();
    noise.validate();
    require(!data.scenes.empty(), ErrorCode::EmptyInput, "denoiser dataset is empty");
    require(!noise.enable_si || data.bias_db != nullptr, ErrorCode::InvariantViolation,
            "signal-independent noise needs a bias database");
    for (const RawFrame& s : data.scenes) {
        s.validate();
        require(s.width >= cfg.crop && s.height >= cfg.crop, ErrorCode::CropOutOfBounds,
                "scene smaller than the training crop");
    }

    const Split split = holdout_split(data.scenes.size(), cfg.val_fraction, cfg.seed);
    const double ratio = noise.ratio;

    // Validation inputs are synthesized once from seeds that do not depend on
    // the step, so every validation pass sees the same noise.
    std::vector<RawFrame> val_noisy;
    double baseline = std::numeric_limits<double>::quiet_NaN();
    MetricConfig raw_metric;
    if (!split.val.empty()) {
        raw_metric.peak = data.scenes[split.val[0]].range();
        double sum = 0.0;
        for (size_t k = 0; k < split.val.size(); ++k) {
            const RawFrame& clean = data.scenes[split.val[k]];
            Rng rng(Rng::derive(cfg.seed ^ 0x76616c6964617465ULL, k));
            val_noisy.push_back(synthesize_noisy(clean, noise, data.bias_db, rng).frame);
            sum += psnr(as_metric_image(gain_baseline(val_noisy.back(), ratio)), as_metric_image(clean), raw_metric);
        }
        baseline = sum / static_cast<double>(split.val.size());
    }

    const SampleFn sample = [&](Rng& rng) {
        const RawFrame& clean = data.scenes[split.train[rng.below(split.train.size())]];
        const int x = 2 * static_cast<int>(rng.below(static_cast<uint64_t>((clean.width - cfg.crop) / 2 + 1)));
        const int y = 2 * static_cast<int>(rng.below(static_cast<uint64_t>((clean.height - cfg.crop) / 2 + 1)));
        const RawFrame target = clean.crop(x, y, cfg.crop, cfg.crop);
        const RawFrame noisy = synthesize_noisy(target, noise, data.bias_db, rng, x, y).frame;
        return Sample{pack_bayer(noisy, ratio), pack_bayer(target)};
    };
    ValFn validate;
    if (!split.val.empty()) {
        validate = [&](const ConvNet<float>& net) {
            double sum = 0.0;
            for (size_t k = 0; k < split.val.size(); ++k)
                sum += psnr(as_metric_image(run_denoiser(net, val_noisy[k], ratio)),
                            as_metric_image(data.scenes[split.val[k]]), raw_metric);
            return sum / static_cast<double>(split.val.size());
        };
    }

    TrainResult r = run_loop(std::move(model), cfg, resume, sample, validate, sink);
    r.train_indices = split.train;
    r.val_indices = split.val;
    r.reference_val_psnr = baseline;
    return r;
}

double mini_isp_psnr(const ConvNet<float>& mini_isp, std::span<const IspPair> pairs, std::span<const size_t> indices) {
    require(!indices.empty(), ErrorCode::EmptyInput, "no pairs to evaluate");
    MetricConfig rgb;
    rgb.peak = 255.0;
    double sum = 0.0;
    for (size_t i : indices) {
        const IspPair& p = pairs[i];
        sum += psnr(as_metric_image(run_mini_isp(mini_isp, preprocess_for_isp(p.raw, p.gains))),
                    as_metric_image(p.target), rgb);
    }
    return sum / static_cast<double>(indices.size());
}

TrainResult train_mini_isp(std::span<const IspPair> pairs, ConvNet<float> model, const TrainConfig& cfg,
                           const TrainState* resume, const LogSink& sink) {
    cfg.validate();
    require(!pairs.empty(), ErrorCode::EmptyInput, "Mini-ISP dataset is empty");
    std::vector<Tensor4<float>> inputs, targets;
    for (const IspPair& p : pairs) {
        p.raw.validate();
        require(p.target.width == p.raw.width && p.target.height == p.raw.height, ErrorCode::DimensionMismatch,
                "target and raw frame differ in size");
        require(p.raw.width >= cfg.crop && p.raw.height >= cfg.crop, ErrorCode::CropOutOfBounds,
                "frame smaller than the training crop");
        inputs.push_back(linear_to_tensor(preprocess_for_isp(p.raw, p.gains)));
        targets.push_back(rgb8_to_tensor(p.target));
    }
    const Split split = holdout_split(pairs.size(), cfg.val_fraction, cfg.seed);

    const SampleFn sample = [&](Rng& rng) {
        const size_t i = split.train[rng.below(split.train.size())];
        const Tensor4<float>& in = inputs[i];
        const int x = 2 * static_cast<int>(rng.below(static_cast<uint64_t>((in.w - cfg.crop) / 2 + 1)));
        const int y = 2 * static_cast<int>(rng.below(static_cast<uint64_t>((in.h - cfg.crop) / 2 + 1)));
        return Sample{crop_tensor(in, x, y, cfg.crop, cfg.crop), crop_tensor(targets[i], x, y, cfg.crop, cfg.crop)};
    };
    ValFn validate;
    if (!split.val.empty())
        validate = [&](const ConvNet<float>& net) { return mini_isp_psnr(net, pairs, split.val); };

    TrainResult r = run_loop(std::move(model), cfg, resume, sample, validate, sink);
    r.train_indices = split.train;
    r.val_indices = split.val;
    r.reference_val_psnr = std::numeric_limits<double>::quiet_NaN();
    return r;
}

RgbImage8 denoise_pipeline(const RawFrame& noisy, double ratio, const ConvNet<float>& denoiser,
                           const ConvNet<float>& mini_isp, WbGains gains) {
    const RawFrame clean = run_denoiser(denoiser, noisy, ratio);
    return run_mini_isp(mini_isp, preprocess_for_isp(clean, gains));
}

}  // namespace hsc
