// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON encodings for exchange messages. Decimals travel as strings, timestamps
// as integer milliseconds and replica ids as 32 hex digits. Decoders throw
// MalformedChangeSet on anything they cannot read.

#include "shoplist/error.hpp"
#include "shoplist/store/schema.hpp"
#include "shoplist/sync/endpoint.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string_view>

namespace shoplist::sync::wire {

using nlohmann::json;

/// Resolves a table name to its definition, or null when unknown.
using TableLookup = std::function<const store::TableDef*(std::string_view)>;

TableLookup lookup_in(const store::Store& store);

json value_to_json(const store::Value& value);
store::Value value_from_json(const json& j, store::ColumnKind kind);
/// Best-effort decoding without a column kind.
store::Value loose_value(const json& j);

/// Self-describing encoding: [tag, value].
json tagged_value(const store::Value& value);
store::Value untag_value(const json& j);

json to_json(const SyncAnchor& anchor);
SyncAnchor anchor_from_json(const json& j);

json to_json(const ChangeRecord& record, const store::TableDef& def);
ChangeRecord record_from_json(const json& j, const TableLookup& lookup);

json to_json(const ChangeSet& changes, const TableLookup& lookup);
ChangeSet changeset_from_json(const json& j, const TableLookup& lookup);

json to_json(const PeerInfo& info);
PeerInfo peer_info_from_json(const json& j);

json to_json(const MergeRequest& request, const TableLookup& lookup);
MergeRequest merge_request_from_json(const json& j, const TableLookup& lookup);
json to_json(const MergeResponse& response, const TableLookup& lookup);
MergeResponse merge_response_from_json(const json& j, const TableLookup& lookup);

json to_json(const PullRequest& request);
PullRequest pull_request_from_json(const json& j);
json to_json(const PullResponse& response);
PullResponse pull_response_from_json(const json& j);

json to_json(const PushRequest& request);
/// Values of columns the lookup cannot type are decoded loosely.
PushRequest push_request_from_json(const json& j, const TableLookup& lookup);
json to_json(const PushResponse& response);
PushResponse push_response_from_json(const json& j);

/// {"error": code, "detail": text, "position"?: n}
json error_to_json(const Error& error);
/// Falls back to TransportFailure for bodies that are not error objects.
Error error_from_json(const json& j);

} // namespace shoplist::sync::wire
