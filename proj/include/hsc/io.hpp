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
#include <string>
#include <vector>

#include "hsc/image.hpp"

namespace hsc {

// HSRW raw container, all integers little-endian:
//   0  magic "HSRW"      4  version (1)      5  pattern code
//   6  reserved u16      8  width u32        12 height u32
//   16 black u16         18 white u16        20 shutter_s f64
//   28 reserved u32      32 width*height u16 samples, row-major
inline constexpr size_t kRawHeaderSize = 32;
inline constexpr uint8_t kRawVersion = 1;

std::vector<uint8_t> encode_raw(const RawFrame& frame);
RawFrame decode_raw(const std::vector<uint8_t>& bytes);

RawFrame read_raw(const std::filesystem::path& path);
void write_raw(const RawFrame& frame, const std::filesystem::path& path);

/// Directory of .hsrw files plus manifest.json:
///   {"device": ..., "notes": ..., "buckets": {"0.0001": ["a.hsrw", ...]}}
BiasFrameDB load_bias_db(const std::filesystem::path& dir);
void save_bias_db(const BiasFrameDB& db, const std::filesystem::path& dir);

/// Binary PPM (P6, maxval 255).
RgbImage8 read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbImage8& image, const std::filesystem::path& path);

std::vector<uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const void* data, size_t size);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Sorted regular files in dir with the given extension (".hsrw").
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir, const std::string& extension);

}  // namespace hsc
