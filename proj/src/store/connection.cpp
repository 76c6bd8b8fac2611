// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/store/connection.hpp"

#include "shoplist/error.hpp"
#include "shoplist/store/schema.hpp"

#include <optional>

namespace shoplist::store {
namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view kSpace = " \t\r\n";
    auto b = s.find_first_not_of(kSpace);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(kSpace);
    return s.substr(b, e - b + 1);
}

} // namespace

ConnectionSpec parse_connection_string(std::string_view text) {
    if (trim(text).empty()) {
        throw Error(ErrorCode::MalformedConnectionString, "empty connection string");
    }
    std::optional<std::string> source;
    std::optional<std::string> password;

    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(';', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view segment = trim(text.substr(start, end - start));
        start = end + 1;
        if (segment.empty()) continue;

        auto eq = segment.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::MalformedConnectionString,
                        "expected key=value in '" + std::string(segment) + "'");
        }
        std::string_view key = trim(segment.substr(0, eq));
        std::string value(trim(segment.substr(eq + 1)));

        std::optional<std::string>* slot = nullptr;
        if (iequals(key, "Data Source")) {
            slot = &source;
        } else if (iequals(key, "Password")) {
            slot = &password;
        } else {
            throw Error(ErrorCode::MalformedConnectionString,
                        "unknown key '" + std::string(key) + "'");
        }
        if (slot->has_value()) {
            throw Error(ErrorCode::MalformedConnectionString,
                        "duplicate key '" + std::string(key) + "'");
        }
        *slot = std::move(value);
    }

    if (!source || source->empty()) {
        throw Error(ErrorCode::MalformedConnectionString, "Data Source is required");
    }
    return ConnectionSpec{std::move(*source), password.value_or("")};
}

std::string render_connection_string(const ConnectionSpec& spec) {
    return "Data Source = " + spec.data_source + "; Password = " + spec.password;
}

std::filesystem::path default_store_path(const std::filesystem::path& executable_dir) {
    // "/a/b/" has an empty filename component; drop it so the join is clean.
    std::filesystem::path dir = executable_dir;
    if (!dir.has_filename() && dir.has_parent_path() && dir != dir.root_path()) {
        dir = dir.parent_path();
    }
    return dir / kDefaultStoreFile;
}

} // namespace shoplist::store
