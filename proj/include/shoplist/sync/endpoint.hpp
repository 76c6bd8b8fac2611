// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/store/schema.hpp"
#include "shoplist/sync/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace shoplist::sync {

class Replica;

struct PeerInfo {
    ReplicaId replica_id;
    std::uint16_t format_version = 0;
    /// Fingerprint of the merge-tracked part of the peer's schema.
    std::uint64_t schema_fingerprint = 0;
};

struct MergeRequest {
    ChangeSet changes;
    ConflictPolicy policy = ConflictPolicy::LatestTimestamp;
    std::uint64_t schema_fingerprint = 0;
};

struct MergeResponse {
    /// Server records the client has not seen. basis_anchor is the server's
    /// anchor after the exchange.
    ChangeSet changes;
    std::vector<Conflict> conflicts;
    std::size_t applied = 0;
    std::vector<Rejection> rejected;
};

struct PullRequest {
    /// Optional; when set it must name the query's source table.
    std::string table;
    std::string query;
};

struct PullResponse {
    std::string source_table;
    std::vector<store::ColumnDef> columns;
    std::vector<Row> rows;
};

struct PushRequest {
    std::string table;
    ReplicaId replica_id;
    /// Payload column names; every record payload is aligned to them.
    std::vector<std::string> columns;
    std::vector<ChangeRecord> records;
};

struct PushResponse {
    std::size_t applied = 0;
    /// Records the server had already applied from an earlier attempt.
    std::size_t skipped = 0;
    std::vector<PushError> errors;
};

/// The server half of every exchange, reachable in-process or over HTTP.
class Endpoint {
public:
    virtual ~Endpoint() = default;
    virtual PeerInfo hello() = 0;
    virtual MergeResponse merge(const MergeRequest& request) = 0;
    virtual PullResponse pull(const PullRequest& request) = 0;
    virtual PushResponse push(const PushRequest& request) = 0;
    /// Executes one non-query statement. Returns the affected row count.
    virtual std::size_t submit(std::string_view sql) = 0;
};

/// Serves requests directly from a replica in the same process.
class LocalEndpoint : public Endpoint {
public:
    explicit LocalEndpoint(Replica& server) : server_(server) {}

    PeerInfo hello() override;
    MergeResponse merge(const MergeRequest& request) override;
    PullResponse pull(const PullRequest& request) override;
    PushResponse push(const PushRequest& request) override;
    std::size_t submit(std::string_view sql) override;

private:
    Replica& server_;
};

} // namespace shoplist::sync
