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

#include "hsc/noise_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hsc/error.hpp"

namespace hsc {

namespace {

using i128 = __int128;

// Per-pixel integer moments of a stack: sum and T*sum(x^2) - sum^2, which is
// T^2 times the population energy.
struct Moments {
    uint64_t frames = 0;
    std::vector<uint64_t> sum;
    std::vector<i128> scaled_energy;
};

Moments moments(const FrameStack& stack) {
    stack.validate();
    const size_t n = stack.frames.front().data.size();
    Moments m;
    m.frames = stack.frames.size();
    m.sum.assign(n, 0);
    std::vector<uint64_t> sq(n, 0);
    for (const RawFrame& f : stack.frames) {
        for (size_t i = 0; i < n; ++i) {
            const uint64_t v = f.data[i];
            m.sum[i] += v;
            sq[i] += v * v;
        }
    }
    m.scaled_energy.resize(n);
    const i128 t = static_cast<i128>(m.frames);
    for (size_t i = 0; i < n; ++i) m.scaled_energy[i] = t * static_cast<i128>(sq[i]) - static_cast<i128>(m.sum[i]) * m.sum[i];
    return m;
}

double to_double(i128 v) { return static_cast<double>(v); }

}  // namespace

void FrameStack::validate() const {
    require(frames.size() >= 2, ErrorCode::TooFewFrames, "a stack needs at least two frames");
    const RawFrame& ref = frames.front();
    for (const RawFrame& f : frames) {
        f.validate();
        require(f.same_geometry(ref) && f.shutter_s == ref.shutter_s, ErrorCode::DimensionMismatch,
                "frames within a stack must share geometry and shutter");
    }
}

TemporalStats temporal_stats(const FrameStack& stack) {
    const Moments m = moments(stack);
    const RawFrame& ref = stack.frames.front();
    TemporalStats out;
    out.width = ref.width;
    out.height = ref.height;
    out.mean.resize(m.sum.size());
    out.energy.resize(m.sum.size());
    const double t = static_cast<double>(m.frames);
    for (size_t i = 0; i < m.sum.size(); ++i) {
        out.mean[i] = static_cast<double>(m.sum[i]) / t;
        out.energy[i] = to_double(m.scaled_energy[i]) / (t * t);
    }
    return out;
}

int Binning::index(double value) const {
    const double pos = (value - lo) / (hi - lo) * count;
    if (!(pos > 0)) return 0;
    return std::min(count - 1, static_cast<int>(pos));
}

std::vector<double> Binning::edges() const {
    std::vector<double> e(static_cast<size_t>(count) + 1);
    for (int i = 0; i <= count; ++i) e[i] = lo + (hi - lo) * i / count;
    return e;
}

void Binning::validate() const {
    require(count >= 1 && hi > lo, ErrorCode::InvariantViolation, "binning needs count >= 1 and hi > lo");
}

NoiseEnergyCurve noise_energy_function(std::span<const FrameStack> stacks, const Binning& bins) {
    require(!stacks.empty(), ErrorCode::EmptyInput, "no frame stacks");
    bins.validate();
    const size_t nb = static_cast<size_t>(bins.count);

    // Exact per-bin sums grouped by stack length, reduced in ascending T.
    std::vector<std::map<uint64_t, i128>> scaled(nb);
    std::vector<uint64_t> counts(nb, 0);
    for (const FrameStack& stack : stacks) {
        const Moments m = moments(stack);
        const double t = static_cast<double>(m.frames);
        std::vector<i128> local(nb, 0);
        for (size_t i = 0; i < m.sum.size(); ++i) {
            const size_t b = static_cast<size_t>(bins.index(static_cast<double>(m.sum[i]) / t));
            local[b] += m.scaled_energy[i];
            ++counts[b];
        }
        for (size_t b = 0; b < nb; ++b) scaled[b][m.frames] += local[b];
    }

    NoiseEnergyCurve curve;
    curve.bin_edges = bins.edges();
    curve.counts = counts;
    curve.mean_energy.assign(nb, std::numeric_limits<double>::quiet_NaN());
    for (size_t b = 0; b < nb; ++b) {
        if (counts[b] == 0) continue;
        double total = 0;
        for (const auto& [frames, value] : scaled[b]) {
            const double t = static_cast<double>(frames);
            total += to_double(value) / (t * t);
        }
        curve.mean_energy[b] = total / static_cast<double>(counts[b]);
    }
    return curve;
}

double bias_energy(const BiasFrameDB& db, double shutter_s) {
    FrameStack stack;
    for (const BiasFrame& b : db.bucket(shutter_s)) stack.frames.push_back(b.frame);
    const Moments m = moments(stack);
    i128 total = 0;
    for (i128 v : m.scaled_energy) total += v;
    const double t = static_cast<double>(m.frames);
    return to_double(total) / (t * t) / static_cast<double>(m.scaled_energy.size());
}

EnergyDecomposition decompose(const NoiseEnergyCurve& curve, double si_energy) {
    EnergyDecomposition d;
    d.si_energy = si_energy;
    d.counts = curve.counts;
    const size_t nb = curve.mean_energy.size();
    d.f_si.assign(nb, si_energy);
    d.f_sd.resize(nb);
    d.residual.resize(nb);
    for (size_t b = 0; b < nb; ++b) {
        d.residual[b] = curve.mean_energy[b] - si_energy;
        d.f_sd[b] = curve.occupied(b) ? std::max(d.residual[b], 0.0) : std::numeric_limits<double>::quiet_NaN();
    }
    return d;
}

IntensityHistogram intensity_histogram(std::span<const FrameStack> stacks, const Binning& bins) {
    require(!stacks.empty(), ErrorCode::EmptyInput, "no frame stacks");
    bins.validate();
    std::vector<uint64_t> counts(static_cast<size_t>(bins.count), 0);
    uint64_t total = 0;
    for (const FrameStack& stack : stacks) {
        const Moments m = moments(stack);
        const double t = static_cast<double>(m.frames);
        for (uint64_t s : m.sum) ++counts[static_cast<size_t>(bins.index(static_cast<double>(s) / t))];
        total += m.sum.size();
    }
    IntensityHistogram h;
    h.bin_edges = bins.edges();
    h.mass.resize(counts.size());
    for (size_t b = 0; b < counts.size(); ++b) h.mass[b] = static_cast<double>(counts[b]) / static_cast<double>(total);
    return h;
}

ComponentEnergies expected_energies(const IntensityHistogram& p, const EnergyDecomposition& decomp) {
    require(p.mass.size() == decomp.f_sd.size() && p.mass.size() == decomp.f_si.size(), ErrorCode::BinMismatch,
            "histogram has " + std::to_string(p.mass.size()) + " bins, decomposition " +
                std::to_string(decomp.f_sd.size()));
    ComponentEnergies e;
    for (size_t b = 0; b < p.mass.size(); ++b) {
        if (decomp.counts[b] == 0 || p.mass[b] == 0) continue;
        e.sd += p.mass[b] * decomp.f_sd[b];
        e.si += p.mass[b] * decomp.f_si[b];
    }
    return e;
}

double si_ratio(double sd_energy, double si_energy) {
    const double total = sd_energy + si_energy;
    require(total > 0, ErrorCode::ZeroTotalEnergy, "total noise energy is zero");
    return si_energy / total;
}

namespace {
nlohmann::json nan_as_null(const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) {
        if (std::isfinite(x))
            a.push_back(x);
        else
            a.push_back(nullptr);
    }
    return a;
}
}  // namespace

nlohmann::json to_json(const NoiseEnergyCurve& c) {
    return {{"bin_edges", c.bin_edges}, {"mean_energy", nan_as_null(c.mean_energy)}, {"counts", c.counts}};
}

nlohmann::json to_json(const EnergyDecomposition& d) {
    return {{"si_energy", d.si_energy},
            {"f_sd", nan_as_null(d.f_sd)},
            {"f_si", d.f_si},
            {"residual", nan_as_null(d.residual)}};
}

nlohmann::json to_json(const IntensityHistogram& h) { return {{"bin_edges", h.bin_edges}, {"mass", h.mass}}; }

}  // namespace hsc
