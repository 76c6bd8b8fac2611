// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/diag/diag.hpp"

#include "shoplist/error.hpp"

#include <pwd.h>
#include <sys/utsname.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <system_error>

namespace shoplist::diag {
namespace {

constexpr std::string_view kUnknown = "unknown";

std::string or_unknown(std::string s) { return s.empty() ? std::string(kUnknown) : s; }

} // namespace

TickSource monotone_ticks() {
    return [] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
    };
}

TickTimer::TickTimer(TickSource ticks) : ticks_(std::move(ticks)) {}

void TickTimer::start() {
    start_ = ticks_();
    end_.reset();
}

std::int64_t TickTimer::stop() {
    if (!start_) throw Error(ErrorCode::NotStarted, "timer was never started");
    end_ = ticks_();
    return time_taken();
}

std::int64_t TickTimer::start_tick() const {
    if (!start_) throw Error(ErrorCode::NotStarted, "timer was never started");
    return *start_;
}

std::int64_t TickTimer::end_tick() const {
    if (!end_) throw Error(ErrorCode::NotStarted, "timer was never stopped");
    return *end_;
}

std::int64_t TickTimer::time_taken() const { return end_tick() - start_tick(); }

TickTimer start_measure(TickSource ticks) {
    TickTimer timer(std::move(ticks));
    timer.start();
    return timer;
}

std::string display_measure_result(TickTimer& timer, std::string_view label) {
    auto taken = timer.stop();
    return std::string(label) + " took: " + std::to_string(taken) + "ms";
}

EnvironmentInfo environment_snapshot() {
    EnvironmentInfo info;

    std::error_code ec;
    auto cwd = std::filesystem::current_path(ec);
    info.current_directory = ec ? std::string(kUnknown) : cwd.string();

    char host[256] = {};
    if (::gethostname(host, sizeof host - 1) == 0) info.machine_name = host;
    info.machine_name = or_unknown(info.machine_name);

    if (const passwd* pw = ::getpwuid(::geteuid()); pw && pw->pw_name) {
        info.user_name = pw->pw_name;
    } else if (const char* user = std::getenv("USER")) {
        info.user_name = user;
    }
    info.user_name = or_unknown(info.user_name);

    utsname uts{};
    if (::uname(&uts) == 0) {
        info.os_version = std::string(uts.sysname) + " " + uts.release + " " + uts.version;
    }
    info.os_version = or_unknown(info.os_version);
    return info;
}

} // namespace shoplist::diag
