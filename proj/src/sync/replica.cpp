// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/sync/replica.hpp"

#include "shoplist/sync/merge.hpp"
#include "shoplist/sync/rda.hpp"

#include <algorithm>

namespace shoplist::sync {

Replica::Replica(store::Store store) : store_(std::move(store)), tracker_(store_) {}

std::unique_ptr<Replica> Replica::create(const store::ConnectionSpec& spec,
                                         const std::vector<store::TableDef>& schema,
                                         store::StoreOptions options, bool track_all) {
    auto replica = std::make_unique<Replica>(store::Store::create(spec, schema, std::move(options)));
    if (track_all) {
        store::Store::Transaction txn(replica->store());
        for (const auto& def : schema) replica->tracker().set_mode(def.name, TrackingMode::Merge);
        txn.commit();
    }
    return replica;
}

std::unique_ptr<Replica> Replica::open(const store::ConnectionSpec& spec, store::StoreOptions options) {
    return std::make_unique<Replica>(store::Store::open(spec, std::move(options)));
}

std::uint64_t Replica::merge_fingerprint() const {
    auto names = tracker_.tables(TrackingMode::Merge);
    std::sort(names.begin(), names.end());
    std::vector<store::TableDef> defs;
    for (const auto& name : names) {
        if (store_.has_table(name)) defs.push_back(store_.table_def(name));
    }
    return store::schema_fingerprint(defs);
}

PeerInfo Replica::info() const {
    return {store_.replica_id(), store::kFormatVersion, merge_fingerprint()};
}

PeerInfo LocalEndpoint::hello() { return server_.info(); }

MergeResponse LocalEndpoint::merge(const MergeRequest& request) { return serve_merge(server_, request); }

PullResponse LocalEndpoint::pull(const PullRequest& request) { return serve_pull(server_, request); }

PushResponse LocalEndpoint::push(const PushRequest& request) { return serve_push(server_, request); }

std::size_t LocalEndpoint::submit(std::string_view sql) { return serve_submit(server_, sql); }

} // namespace shoplist::sync
