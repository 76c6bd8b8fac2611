// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace shoplist::store {

inline constexpr std::string_view kDefaultStoreFile = "ShopList.sdf";

/// Location and password of a store file, as given by a connection string
/// of the form "Data Source = <path>; Password = <pw>".
struct ConnectionSpec {
    std::string data_source;
    /// Empty means no password is required.
    std::string password;

    friend bool operator==(const ConnectionSpec&, const ConnectionSpec&) = default;
};

/// Keys are matched case-insensitively; keys and values are trimmed.
/// Throws MalformedConnectionString on a missing Data Source, a duplicate
/// or unknown key, or a segment without '='.
ConnectionSpec parse_connection_string(std::string_view text);

std::string render_connection_string(const ConnectionSpec& spec);

/// `executable_dir`/ShopList.sdf.
std::filesystem::path default_store_path(const std::filesystem::path& executable_dir);

} // namespace shoplist::store
