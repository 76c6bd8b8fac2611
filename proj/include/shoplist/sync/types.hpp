// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/error.hpp"
#include "shoplist/store/store.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shoplist::sync {

using store::ChangeOp;
using store::ReplicaId;
using store::Row;

/// (origin replica, per-replica counter). Counters start at 1.
struct Version {
    ReplicaId origin;
    std::uint64_t counter = 0;
    friend auto operator<=>(const Version&, const Version&) = default;
};

/// The net tracked change to one row. Deletes carry no payload.
struct ChangeRecord {
    std::string table;
    std::int64_t pk = 0;
    ChangeOp op = ChangeOp::Insert;
    Version version;
    std::int64_t wall_time = 0;
    std::optional<Row> payload;

    bool is_tombstone() const { return op == ChangeOp::Delete; }
    friend bool operator==(const ChangeRecord&, const ChangeRecord&) = default;
};

/// Highest counter seen per origin replica. Entries only ever grow.
class SyncAnchor {
public:
    std::uint64_t get(const ReplicaId& replica) const;
    /// Raises the entry to `counter` if it is lower.
    void advance(const ReplicaId& replica, std::uint64_t counter);
    /// Pointwise maximum.
    void merge(const SyncAnchor& other);
    bool covers(const Version& v) const { return v.counter <= get(v.origin); }

    const std::map<ReplicaId, std::uint64_t>& entries() const { return entries_; }
    friend bool operator==(const SyncAnchor&, const SyncAnchor&) = default;

private:
    std::map<ReplicaId, std::uint64_t> entries_;
};

struct ChangeSet {
    ReplicaId replica_id;
    SyncAnchor basis_anchor;
    /// Ascending by counter; at most one record per (table, pk).
    std::vector<ChangeRecord> records;

    friend bool operator==(const ChangeSet&, const ChangeSet&) = default;
};

enum class ConflictPolicy { ServerWins, ClientWins, LatestTimestamp };

std::string_view to_string(ConflictPolicy policy);
/// Accepts "server", "client" and "latest".
std::optional<ConflictPolicy> conflict_policy_from_string(std::string_view name);

/// True when `a` wins over `b` under LatestTimestamp: later wall time, then
/// the lexicographically smaller origin, then the higher counter.
bool latest_wins(const ChangeRecord& a, const ChangeRecord& b);

struct Conflict {
    std::string table;
    std::int64_t pk = 0;
    ReplicaId winner;
    ConflictPolicy policy = ConflictPolicy::LatestTimestamp;
    friend bool operator==(const Conflict&, const Conflict&) = default;
};

/// A winning change that could not be applied (integrity or type failure).
struct Rejection {
    std::string table;
    std::int64_t pk = 0;
    ErrorCode reason = ErrorCode::ForeignKeyViolation;
    std::string detail;
    friend bool operator==(const Rejection&, const Rejection&) = default;
};

struct MergeReport {
    std::size_t applied_local = 0;
    std::size_t applied_remote = 0;
    std::vector<Conflict> conflicts;
    std::vector<Rejection> rejected_local;
    std::vector<Rejection> rejected_remote;
};

enum class PushErrorReason { RowMissingOnServer, IntegrityViolation, TypeMismatch };

std::string_view to_string(PushErrorReason reason);
std::optional<PushErrorReason> push_error_reason_from_string(std::string_view name);

struct PushError {
    std::string table;
    std::int64_t pk = 0;
    PushErrorReason reason = PushErrorReason::RowMissingOnServer;
    std::string detail;
    friend bool operator==(const PushError&, const PushError&) = default;
};

struct PushResult {
    std::size_t applied = 0;
    std::vector<PushError> errors;
};

/// How a table's local mutations are tracked. A table is tracked by at most
/// one exchange method.
enum class TrackingMode { None, Merge, Rda };

std::string_view to_string(TrackingMode mode);
std::optional<TrackingMode> tracking_mode_from_string(std::string_view name);

} // namespace shoplist::sync
