// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/store/store.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <tuple>
#include <sstream>
#include <string>
#include <vector>

namespace shoplist::testing {

namespace fs = std::filesystem;

/// A fresh directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> seq{0};
        std::random_device rd;
        path_ = fs::temp_directory_path() /
                ("shoplist-test-" + std::to_string(rd()) + "-" + std::to_string(seq++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

/// Manually advanced wall clock shared by copies.
class FakeClock {
public:
    explicit FakeClock(std::int64_t start = 1'700'000'000'000) : now_(std::make_shared<std::int64_t>(start)) {}
    store::WallClock fn() const {
        auto now = now_;
        return [now] { return *now; };
    }
    std::int64_t now() const { return *now_; }
    void set(std::int64_t ms) { *now_ = ms; }
    void advance(std::int64_t ms = 1) { *now_ += ms; }

private:
    std::shared_ptr<std::int64_t> now_;
};

inline store::StoreOptions options_with(const FakeClock& clock) {
    store::StoreOptions o;
    o.clock = clock.fn();
    return o;
}

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Stable text form of one value including its kind.
inline std::string render_value(const store::Value& v) {
    if (store::is_null(v)) return "null";
    return std::string(store::to_string(store::kind_of(v))) + ":" + store::to_display(v);
}

inline std::string render_row(const store::Row& row) {
    std::string out;
    for (const auto& v : row.values) out += render_value(v) + "|";
    return out;
}

/// Every row of the given tables, one line each, in key order.
inline std::string dump_tables(const store::Store& store, const std::vector<std::string>& tables) {
    std::string out;
    for (const auto& t : tables) {
        out += "[" + t + "]\n";
        for (const auto& row : store.scan(t)) out += render_row(row) + "\n";
    }
    return out;
}

inline std::vector<std::string> app_tables() { return {"Categories", "Products", "List"}; }

} // namespace shoplist::testing
