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
#include <filesystem>
#include <optional>
#include <vector>

#include "json.hpp"

#include "hsc/nn/model.hpp"
#include "hsc/nn/optim.hpp"

namespace hsc::nn {

// HSNN checkpoint, little-endian:
//   "HSNN" | u32 version | u32 arch kind | u32 residual | u32 layers L
//   | (L+1) x u32 channel widths | per layer: f32 weights, f32 biases
//   | u32 has_optimizer [ | u64 t | f64 beta1 beta2 eps | f32 m, v per tensor ]
//   | u64 manifest length | manifest JSON (UTF-8)
inline constexpr uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    ConvNet<float> model;
    std::optional<AdamState<float>> optimizer;
    nlohmann::json manifest = nlohmann::json::object();
};

std::vector<uint8_t> encode_checkpoint(const ConvNet<float>& model, const AdamState<float>* optimizer,
                                       const nlohmann::json& manifest);
Checkpoint decode_checkpoint(const std::vector<uint8_t>& bytes);

void save_checkpoint(const std::filesystem::path& path, const ConvNet<float>& model,
                     const AdamState<float>* optimizer = nullptr,
                     const nlohmann::json& manifest = nlohmann::json::object());
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Copies checkpoint weights into model; throws ArchMismatch when the layer
/// layout differs.
void load_weights(ConvNet<float>& model, const Checkpoint& checkpoint);

}  // namespace hsc::nn
