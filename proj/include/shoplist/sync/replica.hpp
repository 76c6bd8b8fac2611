// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/store/store.hpp"
#include "shoplist/sync/endpoint.hpp"
#include "shoplist/sync/tracker.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace shoplist::sync {

/// A store together with its change tracker. Pinned in memory because the
/// tracker is hooked into the store.
class Replica {
public:
    explicit Replica(store::Store store);
    Replica(const Replica&) = delete;
    Replica& operator=(const Replica&) = delete;

    /// Creates a store; when `track_all` is set every table is merge-tracked.
    static std::unique_ptr<Replica> create(const store::ConnectionSpec& spec,
                                           const std::vector<store::TableDef>& schema,
                                           store::StoreOptions options = {}, bool track_all = true);
    static std::unique_ptr<Replica> open(const store::ConnectionSpec& spec,
                                         store::StoreOptions options = {});

    store::Store& store() { return store_; }
    const store::Store& store() const { return store_; }
    ChangeTracker& tracker() { return tracker_; }
    const ChangeTracker& tracker() const { return tracker_; }

    /// Fingerprint over the definitions of merge-tracked tables, by name.
    std::uint64_t merge_fingerprint() const;
    PeerInfo info() const;

    void close() { store_.close(); }

private:
    store::Store store_;
    ChangeTracker tracker_;
};

} // namespace shoplist::sync
