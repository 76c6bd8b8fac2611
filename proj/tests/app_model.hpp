// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "generators.hpp"
#include "shoplist/appcore/shoplist.hpp"
#include "shoplist/error.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace shoplist::testing {

/// Runs one random sequence of app operations against an in-memory model and
/// returns every invariant violation seen, checked after each step.
inline std::vector<std::string> app_sequence_violations(Rng& rng, int steps) {
    using appcore::DisplayColor;
    using appcore::Product;
    std::vector<std::string> violations;
    auto fail = [&](int step, const std::string& what) {
        violations.push_back("step " + std::to_string(step) + ": " + what);
    };

    TempDir dir;
    FakeClock clock;
    auto db = store::Store::create({dir.file("s.sdf"), ""}, store::default_schema(), options_with(clock));
    appcore::ShopList app(db);
    std::map<std::int64_t, Product> products;
    std::map<std::int64_t, bool> bought;  // item id -> flag
    std::map<std::int64_t, std::int64_t> item_product;
    std::vector<std::int64_t> categories;

    for (int step = 0; step < steps; ++step) {
        clock.advance(between(rng, 0, 3));
        switch (pick(rng, 6)) {
        case 0:
            categories.push_back(app.add_category("c" + std::to_string(step)).id);
            break;
        case 1: {
            std::optional<std::int64_t> cat;
            if (!categories.empty() && coin(rng)) cat = categories[pick(rng, categories.size())];
            auto p = app.add_product(cat, "p" + std::to_string(pick(rng, 5)),
                                     store::Decimal::from_scaled(between(rng, 0, 100000)), coin(rng));
            products[p.id] = p;
            break;
        }
        case 2:
            if (!products.empty()) {
                auto it = std::next(products.begin(), static_cast<long>(pick(rng, products.size())));
                bool fav = coin(rng);
                if (app.set_favorite(it->first, fav).is_favorite != fav) fail(step, "set_favorite result");
                it->second.is_favorite = fav;
            }
            break;
        case 3:
            if (!products.empty()) {
                auto pid = std::next(products.begin(), static_cast<long>(pick(rng, products.size())))->first;
                bool listed = std::any_of(item_product.begin(), item_product.end(),
                                          [&](const auto& kv) { return kv.second == pid; });
                if (listed) {
                    try {
                        app.add_to_list(pid);
                        fail(step, "duplicate list item accepted");
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::DuplicateListItem) fail(step, "wrong duplicate error");
                    }
                } else {
                    auto item = app.add_to_list(pid);
                    bought[item.id] = false;
                    item_product[item.id] = pid;
                }
            }
            break;
        case 4:
            if (!bought.empty()) {
                auto it = std::next(bought.begin(), static_cast<long>(pick(rng, bought.size())));
                if (app.check_item(it->first).bought != !it->second) fail(step, "check did not flip");
                if (app.check_item(it->first).bought != it->second) fail(step, "check twice is not identity");
                if (coin(rng)) it->second = app.check_item(it->first).bought;
            }
            break;
        default:
            if (coin(rng, 0.3)) {
                auto counts = std::make_pair(db.row_count("Products"), db.row_count("Categories"));
                if (app.new_shoplist() != bought.size()) fail(step, "new_shoplist count");
                if (!app.current_list().empty()) fail(step, "list not empty after new_shoplist");
                if (counts != std::make_pair(db.row_count("Products"), db.row_count("Categories"))) {
                    fail(step, "new_shoplist touched products or categories");
                }
                bought.clear();
                item_product.clear();
            }
        }

        auto list = app.current_list();
        if (list.size() != bought.size()) fail(step, "list size");
        for (const auto& e : list) {
            auto b = bought.find(e.item.id);
            if (b == bought.end() || e.item.bought != b->second) fail(step, "bought flag");
            if ((e.item.display_color() == DisplayColor::Green) != e.item.bought) fail(step, "color");
            auto p = products.find(e.item.product_id);
            if (p == products.end() || e.product_name != p->second.name || e.price != p->second.price) {
                fail(step, "list join fields");
            }
        }

        std::vector<std::optional<std::int64_t>> filters{std::nullopt};
        filters.insert(filters.end(), categories.begin(), categories.end());
        for (const auto& f : filters) {
            auto all = app.list_products(f, false);
            auto favs = app.list_products(f, true);
            std::vector<Product> expect;
            for (const auto& [id, p] : products) {
                if (!f || p.category_id == f) expect.push_back(p);
            }
            std::sort(expect.begin(), expect.end(), [](const Product& a, const Product& b) {
                return std::tie(a.name, a.id) < std::tie(b.name, b.id);
            });
            if (all != expect) fail(step, "product listing");
            for (const auto& p : favs) {
                if (!p.is_favorite || std::find(all.begin(), all.end(), p) == all.end()) {
                    fail(step, "favorites not a subset");
                }
            }
            auto flagged = std::count_if(all.begin(), all.end(), [](const Product& p) { return p.is_favorite; });
            if (favs.size() != static_cast<std::size_t>(flagged)) fail(step, "favorites count");
        }

        // Every stored reference resolves.
        for (const auto& row : db.scan("Products")) {
            const auto& cat = row.values[1];
            if (!std::holds_alternative<store::Null>(cat) && !db.find("Categories", std::get<std::int64_t>(cat))) {
                fail(step, "dangling product category");
            }
        }
        for (const auto& row : db.scan("List")) {
            if (!db.find("Products", std::get<std::int64_t>(row.values[1]))) fail(step, "dangling list product");
        }
    }
    return violations;
}

} // namespace shoplist::testing
