// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/store/store.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shoplist::appcore {

using store::Decimal;
using store::Timestamp;

inline constexpr std::size_t kMaxCategoryNameLength = 64;

struct Category {
    std::int64_t id = 0;
    std::string name;
    friend bool operator==(const Category&, const Category&) = default;
};

struct Product {
    std::int64_t id = 0;
    std::optional<std::int64_t> category_id;
    std::string name;
    Decimal price;
    bool is_favorite = false;
    friend bool operator==(const Product&, const Product&) = default;
};

enum class DisplayColor { Red, Green };

std::string_view to_string(DisplayColor color);

/// Not bought renders red, bought renders green.
constexpr DisplayColor color_for(bool bought) { return bought ? DisplayColor::Green : DisplayColor::Red; }

struct ShopListItem {
    std::int64_t id = 0;
    std::int64_t product_id = 0;
    bool bought = false;
    Timestamp added_at;

    DisplayColor display_color() const { return color_for(bought); }
    friend bool operator==(const ShopListItem&, const ShopListItem&) = default;
};

/// A list item joined with its product's name and price.
struct ListEntry {
    ShopListItem item;
    std::string product_name;
    Decimal price;
    friend bool operator==(const ListEntry&, const ListEntry&) = default;
};

/// The category/product/list workflows over an open store. Holds a reference;
/// the store must outlive it. Every mutation goes through the store's row
/// operations, so change hooks observe each one.
class ShopList {
public:
    explicit ShopList(store::Store& store) : store_(store) {}

    /// Throws InvalidName (empty, blank or over 64 characters) or
    /// DuplicateCategory (case-insensitive).
    Category add_category(std::string_view name);
    /// Ordered by name, then id.
    std::vector<Category> list_categories() const;

    /// Throws UnknownCategory, InvalidPrice (negative) or InvalidName.
    Product add_product(std::optional<std::int64_t> category_id, std::string_view name, Decimal price,
                        bool favorite);
    Product set_favorite(std::int64_t product_id, bool favorite);
    Product get_product(std::int64_t product_id) const;
    /// Ordered by name, then id.
    std::vector<Product> list_products(std::optional<std::int64_t> category_id, bool favorites_only) const;

    /// Starts a new list by clearing the current one. Returns the number of
    /// items removed.
    std::size_t new_shoplist();
    /// Throws UnknownProduct or DuplicateListItem.
    ShopListItem add_to_list(std::int64_t product_id);
    /// Toggles the bought flag. Throws UnknownItem.
    ShopListItem check_item(std::int64_t item_id);
    /// Ordered by added_at, then id.
    std::vector<ListEntry> current_list() const;

private:
    store::Store& store_;
};

Category category_from_row(const store::Row& row);
Product product_from_row(const store::Row& row);
ShopListItem item_from_row(const store::Row& row);

} // namespace shoplist::appcore
