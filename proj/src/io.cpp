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

#include "hsc/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "hsc/error.hpp"

namespace hsc {

namespace fs = std::filesystem;

namespace {

void put_u16(std::vector<uint8_t>& out, size_t at, uint16_t v) {
    out[at] = static_cast<uint8_t>(v);
    out[at + 1] = static_cast<uint8_t>(v >> 8);
}

void put_u32(std::vector<uint8_t>& out, size_t at, uint32_t v) {
    for (int i = 0; i < 4; ++i) out[at + i] = static_cast<uint8_t>(v >> (8 * i));
}

void put_u64(std::vector<uint8_t>& out, size_t at, uint64_t v) {
    for (int i = 0; i < 8; ++i) out[at + i] = static_cast<uint8_t>(v >> (8 * i));
}

uint16_t get_u16(const std::vector<uint8_t>& in, size_t at) {
    return static_cast<uint16_t>(in[at] | (in[at + 1] << 8));
}

uint32_t get_u32(const std::vector<uint8_t>& in, size_t at) {
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | in[at + i];
    return v;
}

uint64_t get_u64(const std::vector<uint8_t>& in, size_t at) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | in[at + i];
    return v;
}

std::string shutter_key(double shutter_s) {
    std::ostringstream os;
    os.precision(17);
    os << shutter_s;
    return os.str();
}

}  // namespace

std::vector<uint8_t> encode_raw(const RawFrame& frame) {
    frame.validate();
    const size_t n = frame.data.size();
    std::vector<uint8_t> out(kRawHeaderSize + 2 * n, 0);
    std::memcpy(out.data(), "HSRW", 4);
    out[4] = kRawVersion;
    out[5] = static_cast<uint8_t>(frame.pattern);
    put_u32(out, 8, static_cast<uint32_t>(frame.width));
    put_u32(out, 12, static_cast<uint32_t>(frame.height));
    put_u16(out, 16, frame.black_level);
    put_u16(out, 18, frame.white_level);
    put_u64(out, 20, std::bit_cast<uint64_t>(frame.shutter_s));
    for (size_t i = 0; i < n; ++i) put_u16(out, kRawHeaderSize + 2 * i, frame.data[i]);
    return out;
}

RawFrame decode_raw(const std::vector<uint8_t>& bytes) {
    require(bytes.size() >= kRawHeaderSize, ErrorCode::MalformedHeader, "file shorter than the 32-byte header");
    require(std::memcmp(bytes.data(), "HSRW", 4) == 0, ErrorCode::MalformedHeader, "bad magic");
    require(bytes[4] == kRawVersion, ErrorCode::MalformedHeader, "unsupported version " + std::to_string(bytes[4]));
    require(bytes[5] <= 3, ErrorCode::MalformedHeader, "unknown pattern code " + std::to_string(bytes[5]));

    RawFrame f;
    f.pattern = static_cast<BayerPattern>(bytes[5]);
    const uint32_t w = get_u32(bytes, 8);
    const uint32_t h = get_u32(bytes, 12);
    require(w > 0 && h > 0 && w <= (1u << 16) && h <= (1u << 16), ErrorCode::MalformedHeader, "implausible dimensions");
    f.width = static_cast<int>(w);
    f.height = static_cast<int>(h);
    f.black_level = get_u16(bytes, 16);
    f.white_level = get_u16(bytes, 18);
    f.shutter_s = std::bit_cast<double>(get_u64(bytes, 20));

    const size_t n = static_cast<size_t>(w) * h;
    require(bytes.size() - kRawHeaderSize >= 2 * n, ErrorCode::TruncatedData,
            "payload has " + std::to_string(bytes.size() - kRawHeaderSize) + " bytes, need " + std::to_string(2 * n));
    f.data.resize(n);
    for (size_t i = 0; i < n; ++i) f.data[i] = get_u16(bytes, kRawHeaderSize + 2 * i);
    f.validate();
    return f;
}

RawFrame read_raw(const fs::path& path) { return decode_raw(read_file(path)); }

void write_raw(const RawFrame& frame, const fs::path& path) {
    const auto bytes = encode_raw(frame);
    write_file(path, bytes.data(), bytes.size());
}

BiasFrameDB load_bias_db(const fs::path& dir) {
    const auto text = read_file(dir / "manifest.json");
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::IoError, "bad manifest in " + dir.string() + ": " + e.what());
    }
    BiasFrameDB db;
    db.device = manifest.value("device", "");
    db.notes = manifest.value("notes", "");
    require(manifest.contains("buckets") && manifest["buckets"].is_object(), ErrorCode::IoError,
            "manifest lacks a 'buckets' object");
    for (const auto& [key, files] : manifest["buckets"].items()) {
        auto& bucket = db.buckets[std::stod(key)];
        for (const auto& name : files) {
            const std::string id = name.get<std::string>();
            bucket.push_back({id, read_raw(dir / id)});
        }
    }
    db.validate();
    return db;
}

void save_bias_db(const BiasFrameDB& db, const fs::path& dir) {
    db.validate();
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["device"] = db.device;
    manifest["notes"] = db.notes;
    manifest["buckets"] = nlohmann::json::object();
    for (const auto& [shutter, frames] : db.buckets) {
        auto& list = manifest["buckets"][shutter_key(shutter)];
        list = nlohmann::json::array();
        for (const BiasFrame& b : frames) {
            write_raw(b.frame, dir / b.id);
            list.push_back(b.id);
        }
    }
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

RgbImage8 read_ppm(const fs::path& path) {
    const auto bytes = read_file(path);
    size_t pos = 0;
    auto next_token = [&]() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
        std::string tok;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) tok.push_back(static_cast<char>(bytes[pos++]));
        return tok;
    };
    require(next_token() == "P6", ErrorCode::MalformedHeader, path.string() + " is not a binary PPM");
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(next_token());
        h = std::stoi(next_token());
        maxval = std::stoi(next_token());
    } catch (const std::exception&) {
        fail(ErrorCode::MalformedHeader, path.string() + ": unreadable PPM header");
    }
    require(maxval == 255 && w > 0 && h > 0, ErrorCode::MalformedHeader, path.string() + ": only 8-bit PPM is supported");
    ++pos;  // single whitespace after maxval
    RgbImage8 img(w, h);
    require(bytes.size() >= pos + img.data.size(), ErrorCode::TruncatedData, path.string() + ": PPM payload truncated");
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), img.data.size(), img.data.begin());
    return img;
}

void write_ppm(const RgbImage8& image, const fs::path& path) {
    std::string header = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.data.begin(), image.data.end());
    write_file(path, out.data(), out.size());
}

std::vector<uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const void* data, size_t size) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::IoError, "cannot write " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    require(static_cast<bool>(out), ErrorCode::IoError, "short write to " + path.string());
}

void write_text(const fs::path& path, const std::string& text) { write_file(path, text.data(), text.size()); }

std::vector<fs::path> list_files(const fs::path& dir, const std::string& extension) {
    require(fs::is_directory(dir), ErrorCode::IoError, dir.string() + " is not a directory");
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == extension) out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hsc
