// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON shapes of app objects and exchange reports, shared by the HTTP API and
// the CLI's --json output.

#include "shoplist/appcore/shoplist.hpp"
#include "shoplist/sync/types.hpp"

#include <json.hpp>

namespace shoplist::server {

using nlohmann::json;

json to_json(const appcore::Category& category);
json to_json(const appcore::Product& product);
json to_json(const appcore::ShopListItem& item);
json to_json(const appcore::ListEntry& entry);
json to_json(const sync::Conflict& conflict);
json to_json(const sync::Rejection& rejection);
json to_json(const sync::MergeReport& report);
json to_json(const sync::PushError& error);
json to_json(const sync::PushResult& result);

/// Accepts "2.5" or 2.5. Throws InvalidPrice.
store::Decimal price_from_json(const json& j);

} // namespace shoplist::server
