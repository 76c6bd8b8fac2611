// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/sync/types.hpp"

#include <algorithm>

namespace shoplist::sync {

std::uint64_t SyncAnchor::get(const ReplicaId& replica) const {
    auto it = entries_.find(replica);
    return it == entries_.end() ? 0 : it->second;
}

void SyncAnchor::advance(const ReplicaId& replica, std::uint64_t counter) {
    auto& slot = entries_[replica];
    slot = std::max(slot, counter);
}

void SyncAnchor::merge(const SyncAnchor& other) {
    for (const auto& [replica, counter] : other.entries_) advance(replica, counter);
}

std::string_view to_string(ConflictPolicy policy) {
    switch (policy) {
    case ConflictPolicy::ServerWins: return "server";
    case ConflictPolicy::ClientWins: return "client";
    case ConflictPolicy::LatestTimestamp: return "latest";
    }
    return "?";
}

std::optional<ConflictPolicy> conflict_policy_from_string(std::string_view name) {
    if (name == "server") return ConflictPolicy::ServerWins;
    if (name == "client") return ConflictPolicy::ClientWins;
    if (name == "latest") return ConflictPolicy::LatestTimestamp;
    return std::nullopt;
}

bool latest_wins(const ChangeRecord& a, const ChangeRecord& b) {
    if (a.wall_time != b.wall_time) return a.wall_time > b.wall_time;
    if (a.version.origin != b.version.origin) return a.version.origin < b.version.origin;
    return a.version.counter > b.version.counter;
}

std::string_view to_string(PushErrorReason reason) {
    switch (reason) {
    case PushErrorReason::RowMissingOnServer: return "RowMissingOnServer";
    case PushErrorReason::IntegrityViolation: return "IntegrityViolation";
    case PushErrorReason::TypeMismatch: return "TypeMismatch";
    }
    return "?";
}

std::optional<PushErrorReason> push_error_reason_from_string(std::string_view name) {
    for (auto r : {PushErrorReason::RowMissingOnServer, PushErrorReason::IntegrityViolation,
                   PushErrorReason::TypeMismatch}) {
        if (to_string(r) == name) return r;
    }
    return std::nullopt;
}

std::string_view to_string(TrackingMode mode) {
    switch (mode) {
    case TrackingMode::None: return "none";
    case TrackingMode::Merge: return "merge";
    case TrackingMode::Rda: return "rda";
    }
    return "?";
}

std::optional<TrackingMode> tracking_mode_from_string(std::string_view name) {
    if (name == "none") return TrackingMode::None;
    if (name == "merge") return TrackingMode::Merge;
    if (name == "rda") return TrackingMode::Rda;
    return std::nullopt;
}

} // namespace shoplist::sync
