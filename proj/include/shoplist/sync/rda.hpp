// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Remote data access: pull a query result into a local table, edit it
// locally, push the tracked edits back, or run statements on the server.

#include "shoplist/sync/endpoint.hpp"
#include "shoplist/sync/replica.hpp"
#include "shoplist/sync/types.hpp"

#include <string_view>

namespace shoplist::sync {

PullResponse serve_pull(Replica& server, const PullRequest& request);
/// Applies deletes, then updates, then inserts. Records the server already
/// applied for this client are skipped.
PushResponse serve_push(Replica& server, const PushRequest& request);
std::size_t serve_submit(Replica& server, std::string_view sql);

/// Replaces `local_table` with the result of `query` on the server and, when
/// `track` is set, tracks it for rda_push. The result must include the
/// source table's primary key. Throws MissingPrimaryKey,
/// PendingChangesExist, TrackingModeConflict or TransportFailure.
std::size_t rda_pull(Replica& local, Endpoint& remote, std::string_view local_table,
                     std::string_view query, bool track = true);

/// Sends the table's pending edits. Records the server rejects stay pending;
/// the rest are cleared. Throws NotTracked or TransportFailure.
PushResult rda_push(Replica& local, Endpoint& remote, std::string_view local_table);

/// Throws NotAQuery for SELECT.
std::size_t rda_submit_sql(Endpoint& remote, std::string_view sql);

} // namespace shoplist::sync
