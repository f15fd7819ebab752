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
#include <span>
#include <vector>

#include "json.hpp"

#include "hsc/image.hpp"

namespace hsc {

// Temporal noise statistics of static bursts and their split into a
// signal-independent floor (bias-frame energy) and a signal-dependent rest.
//
// All statistics use raw counts including the pedestal. Per-pixel sums are
// accumulated in integers so every result is independent of frame and
// stack order.

/// T >= 2 frames of one static scene with identical geometry and shutter.
struct FrameStack {
    std::vector<RawFrame> frames;

    void validate() const;
};

struct TemporalStats {
    int width = 0;
    int height = 0;
    std::vector<double> mean;    // X-bar per pixel
    std::vector<double> energy;  // (1/T) sum (X - X-bar)^2 per pixel
};

TemporalStats temporal_stats(const FrameStack& stack);

/// Equal-width bins over [lo, hi]; values outside clamp to the edge bins.
struct Binning {
    double lo = 0.0;
    double hi = 1.0;
    int count = 64;

    static Binning for_levels(uint16_t black, uint16_t white, int count = 64) {
        return {static_cast<double>(black), static_cast<double>(white), count};
    }

    int index(double value) const;
    std::vector<double> edges() const;
    void validate() const;
};

/// f(X-bar): mean energy per bin. Empty bins carry count 0 and NaN energy.
struct NoiseEnergyCurve {
    std::vector<double> bin_edges;
    std::vector<double> mean_energy;
    std::vector<uint64_t> counts;

    bool occupied(size_t bin) const { return counts[bin] > 0; }
};

NoiseEnergyCurve noise_energy_function(std::span<const FrameStack> stacks, const Binning& bins);

/// Spatial mean of the temporal energy of one bias bucket.
double bias_energy(const BiasFrameDB& db, double shutter_s);

struct EnergyDecomposition {
    double si_energy = 0.0;
    std::vector<double> f_sd;      // max(f - si, 0); NaN on empty bins
    std::vector<double> f_si;      // si on every bin
    std::vector<double> residual;  // f - si before flooring, for diagnostics
    std::vector<uint64_t> counts;
};

EnergyDecomposition decompose(const NoiseEnergyCurve& curve, double si_energy);

struct IntensityHistogram {
    std::vector<double> bin_edges;
    std::vector<double> mass;  // sums to 1
};

IntensityHistogram intensity_histogram(std::span<const FrameStack> stacks, const Binning& bins);

struct ComponentEnergies {
    double sd = 0.0;
    double si = 0.0;
};

/// Expected SD and SI energies under the intensity distribution p.
ComponentEnergies expected_energies(const IntensityHistogram& p, const EnergyDecomposition& decomp);

/// E_SI / (E_SD + E_SI).
double si_ratio(double sd_energy, double si_energy);

nlohmann::json to_json(const NoiseEnergyCurve& curve);
nlohmann::json to_json(const EnergyDecomposition& decomp);
nlohmann::json to_json(const IntensityHistogram& hist);

}  // namespace hsc
