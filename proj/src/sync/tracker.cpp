// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/sync/tracker.hpp"

#include "shoplist/sync/wire.hpp"

#include <algorithm>

namespace shoplist::sync {
namespace {

using wire::json;

constexpr std::string_view kStateKey = "sync/state";
constexpr std::string_view kLogPrefix = "sync/log/";

std::string log_key(const std::string& table, std::int64_t pk) {
    return std::string(kLogPrefix) + table + "/" + std::to_string(pk);
}

void sort_by_version(std::vector<ChangeRecord>& records) {
    std::sort(records.begin(), records.end(), [](const ChangeRecord& a, const ChangeRecord& b) {
        return std::tie(a.version.counter, a.version.origin, a.table, a.pk) <
               std::tie(b.version.counter, b.version.origin, b.table, b.pk);
    });
}

} // namespace

ChangeTracker::ChangeTracker(store::Store& store) : store_(store), self_(store.replica_id()) {
    reload();
    store_.set_change_hook([this](const store::ChangeEvent& e) { on_change(e); });
    store_.set_rollback_hook([this] { reload(); });
}

ChangeTracker::~ChangeTracker() {
    if (store_.is_open()) {
        store_.set_change_hook(nullptr);
        store_.set_rollback_hook(nullptr);
    }
}

void ChangeTracker::reload() {
    seen_ = {};
    shared_through_ = 0;
    peers_.clear();
    modes_.clear();
    records_.clear();
    if (!store_.is_open()) return;

    if (auto text = store_.meta_get(kStateKey)) {
        auto j = json::parse(*text);
        seen_ = wire::anchor_from_json(j.at("seen"));
        shared_through_ = j.at("shared").get<std::uint64_t>();
        for (const auto& [hex, anchor] : j.at("peers").items()) {
            if (auto id = ReplicaId::from_hex(hex)) peers_[*id] = wire::anchor_from_json(anchor);
        }
        for (const auto& [table, entry] : j.at("modes").items()) {
            auto mode = tracking_mode_from_string(entry.at("mode").get<std::string>());
            if (mode) modes_[table] = {*mode, entry.value("remote", "")};
        }
    }
    for (const auto& [key, text] : store_.meta_scan(kLogPrefix)) {
        auto j = json::parse(text);
        ChangeRecord r;
        r.table = j.at("table").get<std::string>();
        r.pk = j.at("pk").get<std::int64_t>();
        r.op = store::change_op_from_string(j.at("op").get<std::string>()).value();
        r.version.origin = ReplicaId::from_hex(j.at("origin").get<std::string>()).value();
        r.version.counter = j.at("counter").get<std::uint64_t>();
        r.wall_time = j.at("wall").get<std::int64_t>();
        if (auto it = j.find("payload"); it != j.end()) {
            Row row;
            for (const auto& cell : *it) row.values.push_back(wire::untag_value(cell));
            r.payload = std::move(row);
        }
        records_[{r.table, r.pk}] = std::move(r);
    }
}

void ChangeTracker::save_state() {
    json peers = json::object();
    for (const auto& [id, anchor] : peers_) peers[id.hex()] = wire::to_json(anchor);
    json modes = json::object();
    for (const auto& [table, entry] : modes_) {
        modes[table] = {{"mode", to_string(entry.mode)}, {"remote", entry.remote}};
    }
    json j{{"seen", wire::to_json(seen_)},
           {"shared", shared_through_},
           {"peers", std::move(peers)},
           {"modes", std::move(modes)}};
    store_.meta_put(kStateKey, j.dump());
}

void ChangeTracker::save_record(const ChangeRecord& r) {
    json j{{"table", r.table},
           {"pk", r.pk},
           {"op", store::to_string(r.op)},
           {"origin", r.version.origin.hex()},
           {"counter", r.version.counter},
           {"wall", r.wall_time}};
    if (r.payload) {
        json cells = json::array();
        for (const auto& v : r.payload->values) cells.push_back(wire::tagged_value(v));
        j["payload"] = std::move(cells);
    }
    store_.meta_put(log_key(r.table, r.pk), j.dump());
}

void ChangeTracker::erase_record(const Key& key) {
    store_.meta_erase(log_key(key.first, key.second));
    records_.erase(key);
}

std::string ChangeTracker::canonical(std::string_view table) const {
    if (store_.has_table(table)) return store_.table_def(table).name;
    for (const auto& [name, entry] : modes_) {
        if (store::iequals(name, table)) return name;
    }
    return std::string(table);
}

ChangeTracker::Key ChangeTracker::key(std::string_view table, std::int64_t pk) const {
    return {canonical(table), pk};
}

void ChangeTracker::set_mode(std::string_view table, TrackingMode mode, std::string_view remote_table) {
    if (!store_.has_table(table)) throw Error(ErrorCode::UnknownTable, std::string(table));
    auto name = canonical(table);
    if (mode == TrackingMode::None) {
        modes_.erase(name);
    } else {
        modes_[name] = {mode, std::string(remote_table)};
    }
    save_state();
}

TrackingMode ChangeTracker::mode(std::string_view table) const {
    auto it = modes_.find(canonical(table));
    return it == modes_.end() ? TrackingMode::None : it->second.mode;
}

std::optional<std::string> ChangeTracker::remote_table(std::string_view table) const {
    auto it = modes_.find(canonical(table));
    if (it == modes_.end() || it->second.mode != TrackingMode::Rda) return std::nullopt;
    return it->second.remote;
}

std::vector<std::string> ChangeTracker::tables(TrackingMode mode) const {
    std::vector<std::string> out;
    for (const auto& [name, entry] : modes_) {
        if (entry.mode == mode) out.push_back(name);
    }
    return out;
}

void ChangeTracker::on_change(const store::ChangeEvent& e) {
    if (mode(e.table) == TrackingMode::None) return;
    record_change(e.table, e.pk, e.op, e.row ? std::optional<Row>(*e.row) : std::nullopt);
}

std::optional<ChangeRecord> ChangeTracker::record_change(std::string_view table, std::int64_t pk,
                                                         ChangeOp op, std::optional<Row> payload) {
    if (mode(table) == TrackingMode::None) {
        throw Error(ErrorCode::TrackingDisabled, std::string(table));
    }
    auto k = key(table, pk);
    auto it = records_.find(k);
    const ChangeRecord* cur = it == records_.end() ? nullptr : &it->second;
    bool unshared_insert = cur && cur->op == ChangeOp::Insert && cur->version.origin == self_ &&
                           cur->version.counter > shared_through_;

    ChangeRecord r;
    r.table = k.first;
    r.pk = pk;
    switch (op) {
    case ChangeOp::Insert:
        // Re-inserting over a tombstone or a peer's record must stay visible
        // to peers even if deleted again, so it is logged as an update.
        r.op = cur ? ChangeOp::Update : ChangeOp::Insert;
        break;
    case ChangeOp::Update:
        r.op = unshared_insert ? ChangeOp::Insert : ChangeOp::Update;
        break;
    case ChangeOp::Delete:
        if (unshared_insert) {
            erase_record(k);
            return std::nullopt;
        }
        r.op = ChangeOp::Delete;
        break;
    }
    if (r.op != ChangeOp::Delete) r.payload = std::move(payload);
    // Wall times never go backwards for a row, even if the clock does.
    r.wall_time = store_.now();
    if (cur) r.wall_time = std::max(r.wall_time, cur->wall_time + 1);
    r.version = {self_, counter() + 1};
    seen_.advance(self_, r.version.counter);

    save_record(r);
    save_state();
    records_[k] = r;
    return r;
}

ChangeSet ChangeTracker::collect_changes(const SyncAnchor& since, TrackingMode mode) const {
    ChangeSet cs;
    cs.replica_id = self_;
    cs.basis_anchor = seen_;
    for (const auto& [k, r] : records_) {
        if (since.covers(r.version)) continue;
        auto m = modes_.find(k.first);
        if (m == modes_.end() || m->second.mode != mode) continue;
        cs.records.push_back(r);
    }
    sort_by_version(cs.records);
    return cs;
}

std::vector<ChangeRecord> ChangeTracker::records(std::string_view table) const {
    auto name = canonical(table);
    std::vector<ChangeRecord> out;
    for (auto it = records_.lower_bound({name, INT64_MIN}); it != records_.end() && it->first.first == name;
         ++it) {
        out.push_back(it->second);
    }
    sort_by_version(out);
    return out;
}

std::optional<ChangeRecord> ChangeTracker::current(std::string_view table, std::int64_t pk) const {
    auto it = records_.find(key(table, pk));
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

void ChangeTracker::install(const ChangeRecord& record) {
    auto k = key(record.table, record.pk);
    ChangeRecord r = record;
    r.table = k.first;
    save_record(r);
    records_[k] = std::move(r);
}

void ChangeTracker::forget(std::string_view table, std::int64_t pk) {
    auto k = key(table, pk);
    if (records_.contains(k)) erase_record(k);
}

void ChangeTracker::forget_table(std::string_view table) {
    for (const auto& r : records(table)) forget(r.table, r.pk);
    auto name = canonical(table);
    if (modes_.erase(name) > 0) save_state();
}

void ChangeTracker::note_seen(const SyncAnchor& anchor) {
    seen_.merge(anchor);
    save_state();
}

void ChangeTracker::mark_shared(std::uint64_t counter) {
    if (counter <= shared_through_) return;
    shared_through_ = counter;
    save_state();
}

SyncAnchor ChangeTracker::peer_anchor(const ReplicaId& peer) const {
    auto it = peers_.find(peer);
    return it == peers_.end() ? SyncAnchor{} : it->second;
}

void ChangeTracker::set_peer_anchor(const ReplicaId& peer, const SyncAnchor& anchor) {
    peers_[peer] = anchor;
    save_state();
}

std::size_t ChangeTracker::gc_tombstones(std::span<const SyncAnchor> acknowledged) {
    if (acknowledged.empty()) return 0;
    std::vector<Key> purge;
    for (const auto& [k, r] : records_) {
        if (!r.is_tombstone()) continue;
        bool everyone = std::all_of(acknowledged.begin(), acknowledged.end(),
                                    [&](const SyncAnchor& a) { return a.covers(r.version); });
        if (everyone) purge.push_back(k);
    }
    store::Store::Transaction txn(store_);
    for (const auto& k : purge) erase_record(k);
    txn.commit();
    return purge.size();
}

} // namespace shoplist::sync
