// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/sync/endpoint.hpp"
#include "shoplist/sync/wire.hpp"

#include <chrono>
#include <memory>
#include <string>

namespace shoplist::server {

/// Endpoint reached over HTTP. Connection failures and unreadable replies
/// throw TransportFailure; error replies are rethrown with their error code.
class HttpEndpoint : public sync::Endpoint {
public:
    /// `lookup` types the change records exchanged during merges; it usually
    /// points at the local store.
    HttpEndpoint(std::string base_url, sync::wire::TableLookup lookup, std::string bearer_token = {},
                 std::chrono::seconds timeout = std::chrono::seconds(30));
    ~HttpEndpoint() override;

    sync::PeerInfo hello() override;
    sync::MergeResponse merge(const sync::MergeRequest& request) override;
    sync::PullResponse pull(const sync::PullRequest& request) override;
    sync::PushResponse push(const sync::PushRequest& request) override;
    std::size_t submit(std::string_view sql) override;

    /// Sends a request and returns the decoded JSON reply.
    sync::wire::json call(const std::string& method, const std::string& path,
                          const sync::wire::json* body = nullptr);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace shoplist::server
