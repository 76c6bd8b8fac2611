// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/store/store.hpp"
#include "shoplist/sync/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shoplist::sync {

/// Per-row change log for one store.
///
/// Keeps one coalesced record per (table, pk): the latest local change or the
/// remote record that last won for that row. State lives in the store's meta
/// area so it commits and rolls back together with the row data. The tracker
/// installs itself as the store's change and rollback hook and must not
/// outlive the store.
class ChangeTracker {
public:
    explicit ChangeTracker(store::Store& store);
    ~ChangeTracker();
    ChangeTracker(const ChangeTracker&) = delete;
    ChangeTracker& operator=(const ChangeTracker&) = delete;

    const ReplicaId& replica_id() const { return self_; }

    /// Throws UnknownTable. `remote_table` names the server table for Rda mode.
    void set_mode(std::string_view table, TrackingMode mode, std::string_view remote_table = {});
    TrackingMode mode(std::string_view table) const;
    std::optional<std::string> remote_table(std::string_view table) const;
    std::vector<std::string> tables(TrackingMode mode) const;

    /// Logs a local mutation and coalesces it with the row's current record.
    /// Returns the resulting record, or nullopt when an unshared insert was
    /// cancelled by a delete. Throws TrackingDisabled for untracked tables.
    std::optional<ChangeRecord> record_change(std::string_view table, std::int64_t pk, ChangeOp op,
                                              std::optional<Row> payload);

    /// Records of tables in `mode` whose version `since` does not cover,
    /// ascending by counter. basis_anchor is everything this replica has seen.
    ChangeSet collect_changes(const SyncAnchor& since, TrackingMode mode = TrackingMode::Merge) const;
    /// Every record of one table, ascending by counter.
    std::vector<ChangeRecord> records(std::string_view table) const;
    std::optional<ChangeRecord> current(std::string_view table, std::int64_t pk) const;
    std::size_t size() const { return records_.size(); }

    /// Replaces the row's record with one received from a peer.
    void install(const ChangeRecord& record);
    void forget(std::string_view table, std::int64_t pk);
    void forget_table(std::string_view table);

    const SyncAnchor& seen() const { return seen_; }
    void note_seen(const SyncAnchor& anchor);
    std::uint64_t counter() const { return seen_.get(self_); }
    /// Local records up to `counter` have been handed to a peer.
    void mark_shared(std::uint64_t counter);

    SyncAnchor peer_anchor(const ReplicaId& peer) const;
    void set_peer_anchor(const ReplicaId& peer, const SyncAnchor& anchor);
    const std::map<ReplicaId, SyncAnchor>& peer_anchors() const { return peers_; }

    /// Purges tombstones that every anchor in `acknowledged` covers. An empty
    /// span purges nothing. Returns the number purged.
    std::size_t gc_tombstones(std::span<const SyncAnchor> acknowledged);

    /// Re-reads state from the store.
    void reload();

private:
    using Key = std::pair<std::string, std::int64_t>;

    Key key(std::string_view table, std::int64_t pk) const;
    std::string canonical(std::string_view table) const;
    void on_change(const store::ChangeEvent& event);
    void save_state();
    void save_record(const ChangeRecord& record);
    void erase_record(const Key& key);

    struct ModeEntry {
        TrackingMode mode = TrackingMode::None;
        std::string remote;
    };

    store::Store& store_;
    ReplicaId self_;
    SyncAnchor seen_;
    std::uint64_t shared_through_ = 0;
    std::map<ReplicaId, SyncAnchor> peers_;
    std::map<std::string, ModeEntry> modes_;
    std::map<Key, ChangeRecord> records_;
};

} // namespace shoplist::sync
