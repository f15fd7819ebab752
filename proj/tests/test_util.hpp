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

#include <unistd.h>

#include "doctest.h"

#include "hsc/error.hpp"
#include "hsc/image.hpp"
#include "hsc/rng.hpp"

namespace hsc::test {

// Runs expr and checks that it throws hsc::Error with the given code.
#define CHECK_ERROR_CODE(expr, expected)                                   \
    do {                                                                   \
        bool thrown_ = false;                                              \
        try {                                                              \
            (void)(expr);                                                  \
        } catch (const ::hsc::Error& e_) {                                 \
            thrown_ = true;                                                \
            CHECK_MESSAGE(e_.code() == (expected), "got " << e_.what());   \
        }                                                                  \
        CHECK_MESSAGE(thrown_, "expected an hsc::Error from " #expr);      \
    } while (0)

/// Fresh scratch directory under the system temp dir, removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("hsc_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline RawFrame random_frame(Rng& rng, int max_side = 24) {
    const int w = 2 * (1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_side / 2))));
    const int h = 2 * (1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_side / 2))));
    const auto pattern = static_cast<BayerPattern>(rng.below(4));
    const auto black = static_cast<uint16_t>(rng.below(512));
    const auto white = static_cast<uint16_t>(black + 1 + rng.below(65535 - black));
    RawFrame f = RawFrame::filled(w, h, black, pattern, black, white, rng.uniform() < 0.5 ? 0.0 : rng.uniform(1e-5, 1e-2));
    for (auto& v : f.data) v = static_cast<uint16_t>(rng.below(65536));
    return f;
}

}  // namespace hsc::test
