// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/server/app_json.hpp"

#include "shoplist/error.hpp"

namespace shoplist::server {

json to_json(const appcore::Category& category) {
    return {{"id", category.id}, {"name", category.name}};
}

json to_json(const appcore::Product& product) {
    return {{"id", product.id},
            {"category_id", product.category_id ? json(*product.category_id) : json(nullptr)},
            {"name", product.name},
            {"price", product.price.to_string()},
            {"is_favorite", product.is_favorite}};
}

json to_json(const appcore::ShopListItem& item) {
    return {{"id", item.id},
            {"product_id", item.product_id},
            {"bought", item.bought},
            {"added_at", item.added_at.ms},
            {"color", appcore::to_string(item.display_color())}};
}

json to_json(const appcore::ListEntry& entry) {
    auto j = to_json(entry.item);
    j["product_name"] = entry.product_name;
    j["price"] = entry.price.to_string();
    return j;
}

json to_json(const sync::Conflict& conflict) {
    return {{"table", conflict.table},
            {"pk", conflict.pk},
            {"winner", conflict.winner.hex()},
            {"policy", sync::to_string(conflict.policy)}};
}

json to_json(const sync::Rejection& rejection) {
    return {{"table", rejection.table},
            {"pk", rejection.pk},
            {"reason", to_string(rejection.reason)},
            {"detail", rejection.detail}};
}

json to_json(const sync::MergeReport& report) {
    json conflicts = json::array();
    for (const auto& c : report.conflicts) conflicts.push_back(to_json(c));
    json rejected_local = json::array();
    for (const auto& r : report.rejected_local) rejected_local.push_back(to_json(r));
    json rejected_remote = json::array();
    for (const auto& r : report.rejected_remote) rejected_remote.push_back(to_json(r));
    return {{"applied_local", report.applied_local},
            {"applied_remote", report.applied_remote},
            {"conflicts", std::move(conflicts)},
            {"rejected_local", std::move(rejected_local)},
            {"rejected_remote", std::move(rejected_remote)}};
}

json to_json(const sync::PushError& error) {
    return {{"table", error.table},
            {"pk", error.pk},
            {"reason", sync::to_string(error.reason)},
            {"detail", error.detail}};
}

json to_json(const sync::PushResult& result) {
    json errors = json::array();
    for (const auto& e : result.errors) errors.push_back(to_json(e));
    return {{"applied", result.applied}, {"errors", std::move(errors)}};
}

store::Decimal price_from_json(const json& j) {
    std::optional<store::Decimal> price;
    if (j.is_string()) {
        price = store::Decimal::parse(j.get<std::string>());
    } else if (j.is_number_integer()) {
        price = store::Decimal::from_units(j.get<std::int64_t>());
    } else if (j.is_number()) {
        // Round-trips through the shortest decimal text of the double.
        price = store::Decimal::parse(j.dump());
    }
    if (!price) throw Error(ErrorCode::InvalidPrice, "price must be a decimal with at most 4 fraction digits");
    return *price;
}

} // namespace shoplist::server
