// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shoplist::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitDomain = 1,
    kExitUsage = 2,
    kExitTransport = 3,
};

/// Process context the CLI reads besides argv.
struct Environment {
    /// Value of SHOPLIST_DB, if set.
    std::optional<std::string> shoplist_db;
    /// Directory holding the running executable.
    std::filesystem::path executable_dir;

    static Environment from_process();
};

/// --db, then SHOPLIST_DB, then <executable dir>/ShopList.sdf.
std::filesystem::path resolve_store_path(const std::optional<std::string>& db_flag, const Environment& env);

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env);

} // namespace shoplist::cli
