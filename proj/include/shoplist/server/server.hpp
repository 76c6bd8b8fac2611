// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/error.hpp"
#include "shoplist/sync/replica.hpp"
#include "shoplist/sync/types.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

namespace shoplist::server {

struct ServerConfig {
    std::string bind_address = "127.0.0.1";
    int port = 8080;
    /// Bind to a free port chosen by the OS; `port` is then ignored.
    bool any_port = false;
    sync::ConflictPolicy default_policy = sync::ConflictPolicy::LatestTimestamp;
    std::size_t max_request_bytes = 4 * 1024 * 1024;
    /// When non-empty every request must carry "Authorization: Bearer <token>".
    std::string bearer_token;
    /// Base URL of an upstream server. Enables POST /api/sync/merge, which
    /// merges the hosted store with that server.
    std::optional<std::string> remote_url;
    std::string remote_token;
};

inline constexpr std::size_t kMinRequestLimit = 64 * 1024;

/// Throws InvalidConfig.
void validate(const ServerConfig& config);

/// HTTP status used for an error code.
int http_status(ErrorCode code);

/// Serves one replica over HTTP on a background thread. Write requests are
/// serialized; reads share access.
class Server {
public:
    /// The replica must outlive the server.
    Server(ServerConfig config, sync::Replica& replica);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts serving. Throws InvalidConfig or IoFailure.
    void start();
    /// Blocks until stop() is called from elsewhere.
    void wait();
    void stop();

    int port() const;
    /// "http://<bind>:<port>"
    std::string url() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace shoplist::server
