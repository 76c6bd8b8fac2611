// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace shoplist::diag {

/// Milliseconds from an arbitrary monotone epoch.
using TickSource = std::function<std::int64_t()>;

/// steady_clock in milliseconds.
TickSource monotone_ticks();

/// Start/stop tick pair; time_taken() is end - start.
class TickTimer {
public:
    explicit TickTimer(TickSource ticks = monotone_ticks());

    bool started() const { return start_.has_value(); }
    std::int64_t start_tick() const;
    std::int64_t end_tick() const;
    std::int64_t time_taken() const;

    void start();
    /// Captures the end tick. Throws NotStarted.
    std::int64_t stop();

private:
    TickSource ticks_;
    std::optional<std::int64_t> start_;
    std::optional<std::int64_t> end_;
};

TickTimer start_measure(TickSource ticks = monotone_ticks());

/// Stops the timer and returns "<label> took: <ms>ms". Throws NotStarted.
std::string display_measure_result(TickTimer& timer, std::string_view label);

struct EnvironmentInfo {
    std::string current_directory;
    std::string machine_name;
    std::string user_name;
    std::string os_version;
};

/// Fields that cannot be read from the host are "unknown".
EnvironmentInfo environment_snapshot();

} // namespace shoplist::diag
