// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/appcore/shoplist.hpp"

#include "shoplist/error.hpp"

#include <algorithm>
#include <tuple>

namespace shoplist::appcore {
namespace {

using store::Null;
using store::Row;
using store::Value;
namespace tables = store::tables;

// Column positions in the default schema.
enum CategoryCol { kCatId, kCatName };
enum ProductCol { kProdId, kProdCategory, kProdName, kProdPrice, kProdFavorite };
enum ListCol { kItemId, kItemProduct, kItemBought, kItemAddedAt };

std::size_t utf8_length(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

} // namespace

std::string_view to_string(DisplayColor color) {
    return color == DisplayColor::Green ? "green" : "red";
}

Category category_from_row(const Row& row) {
    return {std::get<std::int64_t>(row.values[kCatId]), std::get<std::string>(row.values[kCatName])};
}

Product product_from_row(const Row& row) {
    Product p;
    p.id = std::get<std::int64_t>(row.values[kProdId]);
    if (auto* c = std::get_if<std::int64_t>(&row.values[kProdCategory])) p.category_id = *c;
    p.name = std::get<std::string>(row.values[kProdName]);
    p.price = std::get<Decimal>(row.values[kProdPrice]);
    p.is_favorite = std::get<bool>(row.values[kProdFavorite]);
    return p;
}

ShopListItem item_from_row(const Row& row) {
    ShopListItem item;
    item.id = std::get<std::int64_t>(row.values[kItemId]);
    item.product_id = std::get<std::int64_t>(row.values[kItemProduct]);
    item.bought = std::get<bool>(row.values[kItemBought]);
    item.added_at = std::get<Timestamp>(row.values[kItemAddedAt]);
    return item;
}

Category ShopList::add_category(std::string_view name) {
    if (is_blank(name) || utf8_length(name) > kMaxCategoryNameLength) {
        throw Error(ErrorCode::InvalidName, "category name must be 1-64 characters");
    }
    for (const auto& row : store_.scan(tables::kCategories)) {
        if (store::iequals(std::get<std::string>(row.values[kCatName]), name)) {
            throw Error(ErrorCode::DuplicateCategory, std::string(name));
        }
    }
    Row row{{Null{}, std::string(name)}};
    auto id = store_.insert_row(tables::kCategories, row);
    return {id, std::string(name)};
}

std::vector<Category> ShopList::list_categories() const {
    std::vector<Category> out;
    for (const auto& row : store_.scan(tables::kCategories)) out.push_back(category_from_row(row));
    std::stable_sort(out.begin(), out.end(), [](const Category& a, const Category& b) {
        return std::tie(a.name, a.id) < std::tie(b.name, b.id);
    });
    return out;
}

Product ShopList::add_product(std::optional<std::int64_t> category_id, std::string_view name,
                              Decimal price, bool favorite) {
    if (is_blank(name)) throw Error(ErrorCode::InvalidName, "product name must not be empty");
    if (price < Decimal{}) throw Error(ErrorCode::InvalidPrice, "price must be >= 0");
    if (category_id && !store_.find(tables::kCategories, *category_id)) {
        throw Error(ErrorCode::UnknownCategory, std::to_string(*category_id));
    }
    Value category = category_id ? Value{*category_id} : Value{Null{}};
    Row row{{Null{}, category, std::string(name), price, favorite}};
    auto id = store_.insert_row(tables::kProducts, row);
    return product_from_row(*store_.find(tables::kProducts, id));
}

Product ShopList::get_product(std::int64_t product_id) const {
    auto row = store_.find(tables::kProducts, product_id);
    if (!row) throw Error(ErrorCode::UnknownProduct, std::to_string(product_id));
    return product_from_row(*row);
}

Product ShopList::set_favorite(std::int64_t product_id, bool favorite) {
    if (!store_.find(tables::kProducts, product_id)) {
        throw Error(ErrorCode::UnknownProduct, std::to_string(product_id));
    }
    store::Assignment a{"Is_Favorite", favorite};
    store_.update_row(tables::kProducts, product_id, {&a, 1});
    return get_product(product_id);
}

std::vector<Product> ShopList::list_products(std::optional<std::int64_t> category_id,
                                             bool favorites_only) const {
    if (category_id && !store_.find(tables::kCategories, *category_id)) {
        throw Error(ErrorCode::UnknownCategory, std::to_string(*category_id));
    }
    std::vector<Product> out;
    for (const auto& row : store_.scan(tables::kProducts)) {
        auto p = product_from_row(row);
        if (category_id && p.category_id != category_id) continue;
        if (favorites_only && !p.is_favorite) continue;
        out.push_back(std::move(p));
    }
    std::stable_sort(out.begin(), out.end(), [](const Product& a, const Product& b) {
        return std::tie(a.name, a.id) < std::tie(b.name, b.id);
    });
    return out;
}

std::size_t ShopList::new_shoplist() {
    std::size_t cleared = 0;
    for (const auto& row : store_.scan(tables::kList)) {
        if (store_.delete_row(tables::kList, std::get<std::int64_t>(row.values[kItemId]))) ++cleared;
    }
    return cleared;
}

ShopListItem ShopList::add_to_list(std::int64_t product_id) {
    if (!store_.find(tables::kProducts, product_id)) {
        throw Error(ErrorCode::UnknownProduct, std::to_string(product_id));
    }
    store::Predicate on_list{"Product_Id", store::CompareOp::Eq, product_id};
    if (!store_.scan(tables::kList, on_list).empty()) {
        throw Error(ErrorCode::DuplicateListItem, "product " + std::to_string(product_id) + " is already listed");
    }
    Row row{{Null{}, product_id, false, Null{}}};
    auto id = store_.insert_row(tables::kList, row);
    return item_from_row(*store_.find(tables::kList, id));
}

ShopListItem ShopList::check_item(std::int64_t item_id) {
    auto row = store_.find(tables::kList, item_id);
    if (!row) throw Error(ErrorCode::UnknownItem, std::to_string(item_id));
    bool bought = !std::get<bool>(row->values[kItemBought]);
    store::Assignment a{"Bought", bought};
    store_.update_row(tables::kList, item_id, {&a, 1});
    return item_from_row(*store_.find(tables::kList, item_id));
}

std::vector<ListEntry> ShopList::current_list() const {
    std::vector<ListEntry> out;
    for (const auto& row : store_.scan(tables::kList)) {
        ListEntry e;
        e.item = item_from_row(row);
        auto product = store_.find(tables::kProducts, e.item.product_id);
        if (product) {
            auto p = product_from_row(*product);
            e.product_name = std::move(p.name);
            e.price = p.price;
        }
        out.push_back(std::move(e));
    }
    std::stable_sort(out.begin(), out.end(), [](const ListEntry& a, const ListEntry& b) {
        return std::tie(a.item.added_at, a.item.id) < std::tie(b.item.added_at, b.item.id);
    });
    return out;
}

} // namespace shoplist::appcore
