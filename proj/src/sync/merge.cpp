// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/sync/merge.hpp"

#include <map>
#include <set>
#include <utility>

namespace shoplist::sync {
namespace {

using Key = std::pair<std::string, std::int64_t>;

Key key_of(const store::Store& store, std::string_view table, std::int64_t pk) {
    return {store.table_def(table).name, pk};
}

Key key_of(const store::Store& store, const ChangeRecord& r) { return key_of(store, r.table, r.pk); }

bool is_integrity_error(ErrorCode code) {
    switch (code) {
    case ErrorCode::ForeignKeyViolation:
    case ErrorCode::UniqueViolation:
    case ErrorCode::CheckViolation:
    case ErrorCode::NullViolation:
    case ErrorCode::TypeMismatch:
    case ErrorCode::DuplicateKey:
        return true;
    default:
        return false;
    }
}

void apply_one(Replica& replica, const ChangeRecord& r) {
    if (r.op == ChangeOp::Delete) {
        replica.store().erase_row(r.table, r.pk);
    } else {
        if (!r.payload) throw Error(ErrorCode::MalformedChangeSet, "upsert without payload");
        replica.store().put_row(r.table, *r.payload);
    }
    replica.tracker().install(r);
}

/// Applies winning records. Records blocked by a reference that a later
/// record resolves are retried until no more progress is made.
std::size_t apply_winners(Replica& replica, std::vector<ChangeRecord> winners,
                          std::vector<Rejection>& rejected) {
    std::size_t applied = 0;
    std::vector<std::pair<ChangeRecord, Error>> failed;
    while (!winners.empty()) {
        failed.clear();
        for (auto& r : winners) {
            try {
                apply_one(replica, r);
                ++applied;
            } catch (const Error& e) {
                if (!is_integrity_error(e.code())) throw;
                failed.emplace_back(std::move(r), e);
            }
        }
        if (failed.size() == winners.size()) break;
        winners.clear();
        for (auto& [r, e] : failed) winners.push_back(std::move(r));
    }
    for (auto& [r, e] : failed) rejected.push_back({r.table, r.pk, e.code(), e.detail()});
    return applied;
}

bool incoming_wins(ConflictPolicy policy, const ChangeRecord& incoming, const ChangeRecord* current) {
    if (!current) return true;
    if (policy == ConflictPolicy::LatestTimestamp) return latest_wins(incoming, *current);
    return true;
}

void check_tables(const Replica& replica, const ChangeSet& changes) {
    for (const auto& r : changes.records) {
        if (replica.tracker().mode(r.table) != TrackingMode::Merge) {
            throw Error(ErrorCode::SchemaMismatch, r.table + " is not merge-tracked");
        }
    }
}

} // namespace

MergeResponse serve_merge(Replica& server, const MergeRequest& request) {
    if (request.schema_fingerprint != server.merge_fingerprint()) {
        throw Error(ErrorCode::SchemaMismatch, "merge-tracked schemas differ");
    }
    check_tables(server, request.changes);
    auto& store = server.store();
    auto& tracker = server.tracker();
    const auto& client_seen = request.changes.basis_anchor;

    store::Store::Transaction txn(store);
    MergeResponse resp;
    auto outgoing = tracker.collect_changes(client_seen);
    std::set<Key> unseen_by_client;
    for (const auto& r : outgoing.records) unseen_by_client.insert(key_of(store, r));

    std::vector<ChangeRecord> winners;
    for (const auto& r : request.changes.records) {
        if (tracker.seen().covers(r.version)) continue;
        auto key = key_of(store, r);
        auto current = tracker.current(r.table, r.pk);
        if (current && unseen_by_client.contains(key)) {
            bool client_wins = request.policy == ConflictPolicy::ClientWins ||
                               (request.policy == ConflictPolicy::LatestTimestamp && latest_wins(r, *current));
            resp.conflicts.push_back(
                {key.first, r.pk, client_wins ? r.version.origin : current->version.origin, request.policy});
            if (client_wins) {
                unseen_by_client.erase(key);
                winners.push_back(r);
            }
        } else if (incoming_wins(request.policy, r, current ? &*current : nullptr)) {
            winners.push_back(r);
        }
    }
    resp.applied = apply_winners(server, std::move(winners), resp.rejected);

    std::erase_if(outgoing.records, [&](const ChangeRecord& r) {
        return !unseen_by_client.contains(key_of(store, r));
    });
    tracker.note_seen(client_seen);
    tracker.mark_shared(tracker.counter());
    tracker.set_peer_anchor(request.changes.replica_id, client_seen);
    outgoing.basis_anchor = tracker.seen();
    resp.changes = std::move(outgoing);
    txn.commit();
    return resp;
}

MergeReport merge(Replica& local, Endpoint& remote, ConflictPolicy policy) {
    auto peer = remote.hello();
    if (peer.schema_fingerprint != local.merge_fingerprint()) {
        throw Error(ErrorCode::SchemaMismatch, "merge-tracked schemas differ from peer " + peer.replica_id.hex());
    }
    auto& tracker = local.tracker();
    MergeRequest req;
    req.changes = tracker.collect_changes(tracker.peer_anchor(peer.replica_id));
    req.policy = policy;
    req.schema_fingerprint = local.merge_fingerprint();
    std::uint64_t sent_through = tracker.counter();

    auto resp = remote.merge(req);
    check_tables(local, resp.changes);

    MergeReport report;
    report.applied_remote = resp.applied;
    report.rejected_remote = std::move(resp.rejected);
    report.conflicts = resp.conflicts;

    store::Store::Transaction txn(local.store());
    std::set<Key> decided;
    for (const auto& c : resp.conflicts) decided.insert(key_of(local.store(), c.table, c.pk));

    std::vector<ChangeRecord> winners;
    for (const auto& r : resp.changes.records) {
        if (tracker.seen().covers(r.version)) continue;
        auto current = tracker.current(r.table, r.pk);
        if (decided.contains(key_of(local.store(), r)) ||
            incoming_wins(policy, r, current ? &*current : nullptr)) {
            winners.push_back(r);
        }
    }
    report.applied_local = apply_winners(local, std::move(winners), report.rejected_local);

    tracker.note_seen(resp.changes.basis_anchor);
    tracker.mark_shared(sent_through);
    tracker.set_peer_anchor(peer.replica_id, resp.changes.basis_anchor);
    txn.commit();
    return report;
}

} // namespace shoplist::sync
