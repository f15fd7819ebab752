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


// hsc: command-line front end for the toolkit.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hsc/error.hpp"
#include "hsc/inverse_isp.hpp"
#include "hsc/io.hpp"
#include "hsc/metrics.hpp"
#include "hsc/nn/checkpoint.hpp"
#include "hsc/noise_analysis.hpp"
#include "hsc/noise_model.hpp"
#include "hsc/scenes.hpp"
#include "hsc/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hsc;

namespace {

json read_json(const fs::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::MalformedHeader, path.string() + ": " + e.what());
    }
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

CameraProfile load_profile(const std::string& path) {
    return path.empty() ? CameraProfile{} : camera_profile_from_json(read_json(path));
}

// Relative paths inside a run config are taken relative to the config file.
fs::path resolve(const fs::path& config, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : config.parent_path() / path;
}

std::vector<fs::path> subdirectories(const fs::path& dir) {
    require(fs::is_directory(dir), ErrorCode::IoError, dir.string() + " is not a directory");
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_directory()) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<RawFrame> read_all_raw(const fs::path& dir) {
    std::vector<RawFrame> frames;
    for (const auto& f : list_files(dir, ".hsrw")) frames.push_back(read_raw(f));
    return frames;
}

// A database holding one shutter bucket needs no explicit --shutter.
double pick_shutter(const BiasFrameDB& db, std::optional<double> requested) {
    if (requested) return *requested;
    require(db.buckets.size() == 1, ErrorCode::UnknownShutter,
            "bias database has " + std::to_string(db.buckets.size()) + " shutter buckets; pass --shutter");
    return db.buckets.begin()->first;
}

// Per-image WB gains from a reconstruction sidecar, directly or nested
// under "reconstruction" in a synthesis sidecar.
std::optional<WbGains> sidecar_gains(const fs::path& raw_path) {
    fs::path side = raw_path;
    side.replace_extension(".json");
    if (!fs::exists(side)) return std::nullopt;
    json j = read_json(side);
    if (j.contains("reconstruction")) j = j.at("reconstruction");
    if (!j.contains("g_red") || !j.contains("g_blue")) return std::nullopt;
    return reconstruction_meta_from_json(j).gains;
}

void log_line(const std::string& s) { std::cerr << s << "\n"; }

// ------------------------------------------------------------ make-demo

struct DemoOptions {
    std::string out;
    int images = 24;
    int size = 64;
    uint64_t seed = 1;
};

void make_demo(const DemoOptions& o) {
    require(o.size >= 16 && o.size % 2 == 0, ErrorCode::InvariantViolation, "--size must be even and >= 16");
    const fs::path root(o.out);
    const CameraProfile profile;
    constexpr double shutter = 1e-4;
    fs::create_directories(root / "images");
    for (int i = 0; i < o.images; ++i) {
        Rng rng(Rng::derive(o.seed, static_cast<uint64_t>(i)));
        char name[32];
        std::snprintf(name, sizeof name, "scene_%03d.ppm", i);
        write_ppm(scenes::natural_image(o.size, o.size, rng, 32, 255), root / "images" / name);
    }
    const BiasFrameDB db = scenes::bias_database(o.size, o.size, profile, {}, {shutter}, 16, o.seed ^ 0xb1a5);
    save_bias_db(db, root / "bias_db");

    Rng rng(Rng::derive(o.seed, 1u << 20));
    // Flat bursts for estimate-gain.
    for (int s = 0; s < 3; ++s) {
        const double level = 200.0 * (1 << (2 * s));
        const fs::path dir = root / "flats" / ("level_" + std::to_string(static_cast<int>(level)));
        fs::create_directories(dir);
        const auto burst = scenes::flat_burst(o.size, o.size, level, profile.system_gain, 16, profile, rng);
        for (size_t t = 0; t < burst.size(); ++t) write_raw(burst[t], dir / ("flat_" + std::to_string(t) + ".hsrw"));
    }
    // Static scenes captured 16 times at R = 8 for analyze.
    SynthesisConfig noise;
    noise.ratio = 8;
    noise.system_gain = profile.system_gain;
    noise.shutter_s = shutter;
    for (int s = 0; s < 3; ++s) {
        const fs::path dir = root / "stacks" / ("scene_" + std::to_string(s));
        fs::create_directories(dir);
        const RawFrame clean = reconstruct_long_exposure(scenes::natural_image(o.size, o.size, rng), {}, rng).frame;
        for (int t = 0; t < 16; ++t)
            write_raw(synthesize_noisy(clean, noise, &db, rng).frame, dir / ("frame_" + std::to_string(t) + ".hsrw"));
    }

    const json denoise = {{"clean_dir", "raw"},
                          {"bias_db", "bias_db"},
                          {"synthesis", {{"ratio", 8}, {"system_gain", profile.system_gain}, {"shutter_s", shutter}}},
                          {"train", {{"steps", 300}, {"lr0", 1e-3}, {"crop", 32}, {"val_every", 100}, {"seed", 7}}},
                          {"model", {{"depth", 4}, {"width", 16}, {"init_seed", 3}}}};
    write_json(root / "denoise_run.json", denoise);
    const json isp = {{"raw_dir", "raw"},
                      {"train", {{"steps", 300}, {"lr0", 3e-3}, {"crop", 32}, {"val_every", 100}, {"loss", "L2"}, {"seed", 5}}},
                      {"model", {{"width", 16}, {"init_seed", 4}}}};
    write_json(root / "isp_run.json", isp);
    log_line("demo data written to " + root.string());
}

// ------------------------------------------------------------ reconstruct

struct ReconstructOptions {
    std::string input, out, profile;
    uint64_t seed = 0;
    bool no_dither = false;
};

void reconstruct(const ReconstructOptions& o) {
    ReconstructionConfig cfg;
    cfg.profile = load_profile(o.profile);
    cfg.dither = !o.no_dither;
    cfg.seed = o.seed;
    const auto files = list_files(o.input, ".ppm");
    require(!files.empty(), ErrorCode::EmptyInput, "no .ppm files in " + o.input);
    fs::create_directories(o.out);
    for (size_t i = 0; i < files.size(); ++i) {
        Rng rng(Rng::derive(o.seed, i));
        Reconstruction rec = reconstruct_long_exposure(read_ppm(files[i]), cfg, rng);
        rec.meta.source_id = files[i].filename().string();
        const fs::path stem = fs::path(o.out) / files[i].stem();
        write_raw(rec.frame, fs::path(stem).replace_extension(".hsrw"));
        write_json(fs::path(stem).replace_extension(".json"), to_json(rec.meta));
    }
    log_line("reconstructed " + std::to_string(files.size()) + " images");
}

// ------------------------------------------------------------ synth

struct SynthOptions {
    std::string input, bias_db, out;
    double ratio = 1.0, k = 0.4;
    std::optional<double> shutter;
    uint64_t seed = 0;
    bool no_sd = false, no_si = false;
};

void synth(const SynthOptions& o) {
    SynthesisConfig cfg;
    cfg.ratio = o.ratio;
    cfg.system_gain = o.k;
    cfg.enable_sd = !o.no_sd;
    cfg.enable_si = !o.no_si;
    cfg.seed = o.seed;
    std::optional<BiasFrameDB> db;
    if (cfg.enable_si) {
        require(!o.bias_db.empty(), ErrorCode::InvariantViolation, "--bias-db is required unless --no-si is given");
        db = load_bias_db(o.bias_db);
        cfg.shutter_s = pick_shutter(*db, o.shutter);
    }
    cfg.validate();
    const auto files = list_files(o.input, ".hsrw");
    require(!files.empty(), ErrorCode::EmptyInput, "no .hsrw files in " + o.input);
    fs::create_directories(o.out);
    for (size_t i = 0; i < files.size(); ++i) {
        Rng rng(Rng::derive(o.seed, i));
        Synthesis s = synthesize_noisy(read_raw(files[i]), cfg, db ? &*db : nullptr, rng);
        s.meta.source_id = files[i].filename().string();
        json side = to_json(s.meta);
        fs::path clean_side = files[i];
        clean_side.replace_extension(".json");
        if (fs::exists(clean_side)) side["reconstruction"] = read_json(clean_side);
        const fs::path stem = fs::path(o.out) / files[i].stem();
        write_raw(s.frame, fs::path(stem).replace_extension(".hsrw"));
        write_json(fs::path(stem).replace_extension(".json"), side);
    }
    std::fprintf(stderr, "synthesized %zu frames at R = %g\n", files.size(), o.ratio);
}

// ------------------------------------------------------------ analyze

struct AnalyzeOptions {
    std::string stacks, bias_db, out, csv;
    int bins = 64;
    std::optional<double> shutter;
};

void analyze(const AnalyzeOptions& o) {
    std::vector<FrameStack> stacks;
    for (const auto& dir : subdirectories(o.stacks)) stacks.push_back({read_all_raw(dir)});
    require(!stacks.empty(), ErrorCode::EmptyInput, "no stack subdirectories in " + o.stacks);
    const RawFrame& first = stacks.front().frames.at(0);
    const Binning bins = Binning::for_levels(first.black_level, first.white_level, o.bins);
    const BiasFrameDB db = load_bias_db(o.bias_db);
    const double shutter = pick_shutter(db, o.shutter);

    const NoiseEnergyCurve curve = noise_energy_function(stacks, bins);
    const EnergyDecomposition decomp = decompose(curve, bias_energy(db, shutter));
    const IntensityHistogram hist = intensity_histogram(stacks, bins);
    const ComponentEnergies e = expected_energies(hist, decomp);
    const double ratio = si_ratio(e.sd, e.si);
    const json report = {{"stacks", stacks.size()},
                         {"shutter_s", shutter},
                         {"curve", to_json(curve)},
                         {"decomposition", to_json(decomp)},
                         {"histogram", to_json(hist)},
                         {"expected_energy", {{"sd", e.sd}, {"si", e.si}}},
                         {"si_ratio", ratio},
                         {"sd_ratio", 1.0 - ratio}};
    write_json(o.out, report);
    if (!o.csv.empty()) {
        std::string csv = "bin_lo,bin_hi,count,mean_energy,f_sd,f_si,mass\n";
        for (size_t b = 0; b < curve.counts.size(); ++b) {
            char line[256];
            std::snprintf(line, sizeof line, "%.6g,%.6g,%llu,%.9g,%.9g,%.9g,%.9g\n", curve.bin_edges[b],
                          curve.bin_edges[b + 1], static_cast<unsigned long long>(curve.counts[b]), curve.mean_energy[b],
                          decomp.f_sd[b], decomp.f_si[b], hist.mass[b]);
            csv += line;
        }
        write_text(o.csv, csv);
    }
    std::printf("si_ratio %.6f (E_SI %.6g, E_SD %.6g)\n", ratio, e.si, e.sd);
}

// ------------------------------------------------------------ estimate-gain

void estimate_gain(const std::string& flats, const std::string& out) {
    std::vector<std::vector<RawFrame>> levels;
    for (const auto& dir : subdirectories(flats)) levels.push_back(read_all_raw(dir));
    const double k = estimate_system_gain(levels);
    if (!out.empty()) write_json(out, {{"system_gain", k}, {"levels", levels.size()}});
    std::printf("system_gain %.6f\n", k);
}

// ------------------------------------------------------------ eval

void eval(const std::string& pred, const std::string& gt, const std::string& space, const std::string& out,
          const std::string& csv) {
    const MetricSpace s = space == "rgb" ? MetricSpace::Rgb : MetricSpace::Raw;
    const EvalReport report = eval_report(pred, gt, s);
    if (!out.empty()) write_json(out, report.to_json());
    if (!csv.empty()) write_text(csv, report.to_csv());
    std::printf("%zu images: PSNR %.4f dB, SSIM %.6f\n", report.images.size(), report.mean_psnr, report.mean_ssim);
}

// ------------------------------------------------------------ training

struct TrainOptions {
    std::string config, out, resume;
};

// Streams the log to disk as training runs; resumed runs append.
LogSink jsonl_sink(std::ofstream& log) {
    return [&log](const TrainLogEntry& e) {
        log << to_json(e).dump() << "\n";
        log.flush();
        if (e.val_psnr)
            std::fprintf(stderr, "step %lld  lr %.3g  loss %.6f  val_psnr %.3f\n", static_cast<long long>(e.step), e.lr,
                         e.loss, *e.val_psnr);
    };
}

std::optional<TrainState> load_resume(const std::string& path, const nn::Architecture& arch) {
    if (path.empty()) return std::nullopt;
    const nn::Checkpoint ck = nn::load_checkpoint(path);
    require(ck.model.architecture() == arch, ErrorCode::ArchMismatch,
            "resume checkpoint has " + ck.model.architecture().describe() + ", config asks for " + arch.describe());
    require(ck.optimizer.has_value(), ErrorCode::MalformedCheckpoint, "resume checkpoint has no optimizer state");
    return TrainState{ck.model, *ck.optimizer, ck.manifest.value("step", ck.optimizer->t)};
}

void finish_training(const fs::path& out, const std::string& file, const TrainResult& r, json manifest) {
    manifest["step"] = r.state.step;
    manifest["train_indices"] = r.train_indices;
    manifest["val_indices"] = r.val_indices;
    if (!std::isnan(r.reference_val_psnr)) manifest["reference_val_psnr"] = r.reference_val_psnr;
    if (!r.log.empty() && r.log.back().val_psnr) manifest["final_val_psnr"] = *r.log.back().val_psnr;
    nn::save_checkpoint(out / file, r.state.model, &r.state.optimizer, manifest);
    log_line("checkpoint written to " + (out / file).string() + " at step " + std::to_string(r.state.step));
}

void train_denoise(const TrainOptions& o) {
    const fs::path config(o.config);
    const json run = read_json(config);
    const TrainConfig cfg = train_config_from_json(run.value("train", json::object()));
    cfg.validate();
    const SynthesisConfig noise = synthesis_config_from_json(run.value("synthesis", json::object()));
    noise.validate();
    const json model = run.value("model", json::object());
    const nn::Architecture arch = nn::tiny_denoiser_architecture(model.value("depth", 6), model.value("width", 32));

    PairedDataset data;
    data.scenes = read_all_raw(resolve(config, run.at("clean_dir").get<std::string>()));
    std::optional<BiasFrameDB> db;
    if (run.contains("bias_db")) {
        db = load_bias_db(resolve(config, run.at("bias_db").get<std::string>()));
        data.bias_db = &*db;
    }
    nn::ConvNet<float> net(arch);
    net.initialize(model.value("init_seed", uint64_t{0}));
    const auto resume = load_resume(o.resume, arch);

    const fs::path out(o.out);
    fs::create_directories(out);
    std::ofstream log(out / "train_log.jsonl", resume ? std::ios::app : std::ios::trunc);
    const TrainResult r = train_denoiser(data, noise, net, cfg, resume ? &*resume : nullptr, jsonl_sink(log));
    finish_training(out, "denoiser.hsnn", r,
                    {{"task", "denoise"}, {"train", to_json(cfg)}, {"synthesis", to_json(noise)}, {"model", model}});
}

void train_isp(const TrainOptions& o) {
    const fs::path config(o.config);
    const json run = read_json(config);
    TrainConfig defaults;
    defaults.loss = LossKind::L2;
    const TrainConfig cfg = train_config_from_json(run.value("train", json::object()), defaults);
    cfg.validate();
    const CameraProfile profile = camera_profile_from_json(run.value("profile", json::object()));
    const json model = run.value("model", json::object());
    const nn::Architecture arch = nn::mini_isp_architecture(model.value("width", 128));

    // Targets come from a directory of processed images when given, else
    // from the forward ISP of each raw frame.
    const fs::path raw_dir = resolve(config, run.at("raw_dir").get<std::string>());
    std::optional<fs::path> target_dir;
    if (run.contains("target_dir")) target_dir = resolve(config, run.at("target_dir").get<std::string>());
    std::vector<IspPair> pairs;
    for (const auto& f : list_files(raw_dir, ".hsrw")) {
        IspPair p;
        p.raw = read_raw(f);
        const auto gains = sidecar_gains(f);
        require(gains.has_value(), ErrorCode::MissingPair, "no WB sidecar for " + f.string());
        p.gains = *gains;
        if (target_dir) {
            const fs::path t = *target_dir / (f.stem().string() + ".ppm");
            require(fs::exists(t), ErrorCode::MissingPair, "no target image " + t.string());
            p.target = read_ppm(t);
        } else {
            p.target = forward_isp(p.raw, p.gains, profile);
        }
        pairs.push_back(std::move(p));
    }
    nn::ConvNet<float> net(arch);
    net.initialize(model.value("init_seed", uint64_t{0}));
    const auto resume = load_resume(o.resume, arch);

    const fs::path out(o.out);
    fs::create_directories(out);
    std::ofstream log(out / "train_log.jsonl", resume ? std::ios::app : std::ios::trunc);
    const TrainResult r = train_mini_isp(pairs, net, cfg, resume ? &*resume : nullptr, jsonl_sink(log));
    finish_training(out, "mini_isp.hsnn", r,
                    {{"task", "mini_isp"}, {"train", to_json(cfg)}, {"profile", to_json(profile)}, {"model", model}});
}

// ------------------------------------------------------------ denoise

struct DenoiseOptions {
    std::string input, out, denoiser, mini_isp;
    double ratio = 1.0;
    std::vector<double> gains{1.0, 1.0};
};

void denoise(const DenoiseOptions& o) {
    const nn::Checkpoint den = nn::load_checkpoint(o.denoiser);
    const nn::Checkpoint isp = nn::load_checkpoint(o.mini_isp);
    require(den.model.architecture().kind == nn::ArchKind::TinyDenoiser, ErrorCode::ArchMismatch,
            o.denoiser + " is not a denoiser checkpoint");
    require(isp.model.architecture().kind == nn::ArchKind::MiniIsp, ErrorCode::ArchMismatch,
            o.mini_isp + " is not a Mini-ISP checkpoint");
    const auto files = list_files(o.input, ".hsrw");
    require(!files.empty(), ErrorCode::EmptyInput, "no .hsrw files in " + o.input);
    fs::create_directories(o.out);
    int fallback = 0;
    for (const auto& f : files) {
        const auto side = sidecar_gains(f);
        fallback += side ? 0 : 1;
        const WbGains gains = side ? *side : WbGains{o.gains[0], o.gains[1]};
        write_ppm(denoise_pipeline(read_raw(f), o.ratio, den.model, isp.model, gains),
                  fs::path(o.out) / (f.stem().string() + ".ppm"));
    }
    if (fallback) log_line(std::to_string(fallback) + " frames had no WB sidecar; used --gains");
    log_line("denoised " + std::to_string(files.size()) + " frames");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hsc: raw reconstruction, noise synthesis and analysis, and low-light denoising"};
    app.require_subcommand(1);

    DemoOptions demo;
    auto* c_demo = app.add_subcommand("make-demo", "Write a small procedural dataset and run configs");
    c_demo->add_option("--out", demo.out, "Output directory")->required();
    c_demo->add_option("--images", demo.images, "Number of scenes");
    c_demo->add_option("--size", demo.size, "Scene side in pixels (even)");
    c_demo->add_option("--seed", demo.seed);

    ReconstructOptions rec;
    auto* c_rec = app.add_subcommand("reconstruct", "Unprocess 8-bit RGB (.ppm) into linear raw (.hsrw)");
    c_rec->add_option("--input", rec.input, "Directory of .ppm images")->required();
    c_rec->add_option("--out", rec.out, "Output directory")->required();
    c_rec->add_option("--profile", rec.profile, "Camera profile JSON");
    c_rec->add_option("--seed", rec.seed);
    c_rec->add_flag("--no-dither", rec.no_dither, "Dequantize to bin centres");

    SynthOptions syn;
    auto* c_syn = app.add_subcommand("synth", "Synthesize short-exposure noisy frames from clean raw");
    c_syn->add_option("--input", syn.input, "Directory of clean .hsrw frames")->required();
    c_syn->add_option("--bias-db", syn.bias_db, "Bias frame database directory");
    c_syn->add_option("--ratio", syn.ratio, "Exposure ratio R >= 1")->required();
    c_syn->add_option("--k", syn.k, "System gain K");
    c_syn->add_option("--shutter", syn.shutter, "Bias bucket shutter time in seconds");
    c_syn->add_option("--seed", syn.seed);
    c_syn->add_flag("--no-sd", syn.no_sd, "Disable shot noise");
    c_syn->add_flag("--no-si", syn.no_si, "Disable bias-frame noise");
    c_syn->add_option("--out", syn.out, "Output directory")->required();

    AnalyzeOptions ana;
    auto* c_ana = app.add_subcommand("analyze", "Split temporal noise energy into SI and SD parts");
    c_ana->add_option("--stacks", ana.stacks, "Directory with one subdirectory of frames per static scene")->required();
    c_ana->add_option("--bias-db", ana.bias_db, "Bias frame database directory")->required();
    c_ana->add_option("--bins", ana.bins, "Intensity bins");
    c_ana->add_option("--shutter", ana.shutter, "Bias bucket shutter time in seconds");
    c_ana->add_option("--out", ana.out, "Report JSON")->required();
    c_ana->add_option("--csv", ana.csv, "Per-bin CSV dump");

    std::string flats, gain_out;
    auto* c_gain = app.add_subcommand("estimate-gain", "Photon-transfer estimate of the system gain K");
    c_gain->add_option("--flats", flats, "Directory with one subdirectory of flats per illumination level")->required();
    c_gain->add_option("--out", gain_out, "Result JSON");

    std::string pred, gt, space = "raw", eval_out, eval_csv;
    auto* c_eval = app.add_subcommand("eval", "PSNR / SSIM of predictions against ground truth");
    c_eval->add_option("--pred", pred, "Prediction directory")->required();
    c_eval->add_option("--gt", gt, "Ground-truth directory")->required();
    c_eval->add_option("--space", space, "raw (.hsrw) or rgb (.ppm)")->check(CLI::IsMember({"raw", "rgb"}));
    c_eval->add_option("--out", eval_out, "Report JSON");
    c_eval->add_option("--csv", eval_csv, "Per-image CSV");

    TrainOptions tden, tisp;
    auto* c_tden = app.add_subcommand("train-denoise", "Train the raw denoiser from a JSON run config");
    c_tden->add_option("--config", tden.config, "Run config JSON")->required();
    c_tden->add_option("--out", tden.out, "Output directory")->required();
    c_tden->add_option("--resume", tden.resume, "Checkpoint to resume from");
    auto* c_tisp = app.add_subcommand("train-isp", "Train the Mini-ISP from a JSON run config");
    c_tisp->add_option("--config", tisp.config, "Run config JSON")->required();
    c_tisp->add_option("--out", tisp.out, "Output directory")->required();
    c_tisp->add_option("--resume", tisp.resume, "Checkpoint to resume from");

    DenoiseOptions den;
    auto* c_den = app.add_subcommand("denoise", "Denoise raw frames and render them with the Mini-ISP");
    c_den->add_option("--input", den.input, "Directory of noisy .hsrw frames")->required();
    c_den->add_option("--ratio", den.ratio, "Exposure ratio R the denoiser was trained for")->required();
    c_den->add_option("--denoiser", den.denoiser, "Denoiser checkpoint")->required();
    c_den->add_option("--mini-isp", den.mini_isp, "Mini-ISP checkpoint")->required();
    c_den->add_option("--gains", den.gains, "Fallback WB gains (red blue) for frames without a sidecar")->expected(2);
    c_den->add_option("--out", den.out, "Output directory for .ppm")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_demo) make_demo(demo);
        if (*c_rec) reconstruct(rec);
        if (*c_syn) synth(syn);
        if (*c_ana) analyze(ana);
        if (*c_gain) estimate_gain(flats, gain_out);
        if (*c_eval) eval(pred, gt, space, eval_out, eval_csv);
        if (*c_tden) train_denoise(tden);
        if (*c_tisp) train_isp(tisp);
        if (*c_den) denoise(den);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
