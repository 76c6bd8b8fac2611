// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/sync/endpoint.hpp"
#include "shoplist/sync/replica.hpp"
#include "shoplist/sync/types.hpp"

namespace shoplist::sync {

/// Server half of a merge. Applies the client's changes that win, returns the
/// server changes the client lacks. Runs as one store transaction. Throws
/// SchemaMismatch when the merge-tracked schemas differ.
MergeResponse serve_merge(Replica& server, const MergeRequest& request);

/// Two-way merge of `local` with the replica behind `remote`. Local state
/// changes only after a complete response arrives; a TransportFailure leaves
/// both anchors where they were.
MergeReport merge(Replica& local, Endpoint& remote, ConflictPolicy policy);

} // namespace shoplist::sync
