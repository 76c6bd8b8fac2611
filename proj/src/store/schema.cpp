// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/store/schema.hpp"

#include "shoplist/error.hpp"

#include <algorithm>
#include <cctype>

namespace shoplist::store {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::tolower(x) == std::tolower(y);
           });
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto head = static_cast<unsigned char>(s.front());
    if (!std::isalpha(head) && head != '_') return false;
    return std::all_of(s.begin() + 1, s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

std::optional<std::size_t> TableDef::find_column(std::string_view column) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (iequals(columns[i].name, column)) return i;
    }
    return std::nullopt;
}

std::size_t TableDef::pk_index() const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].primary_key) return i;
    }
    throw Error(ErrorCode::InvalidSchema, "table " + name + " has no primary key");
}

void validate(const TableDef& def) {
    if (!is_identifier(def.name)) {
        throw Error(ErrorCode::InvalidSchema, "bad table name '" + def.name + "'");
    }
    std::size_t pk_count = 0;
    for (std::size_t i = 0; i < def.columns.size(); ++i) {
        const auto& col = def.columns[i];
        if (!is_identifier(col.name)) {
            throw Error(ErrorCode::InvalidSchema, "bad column name '" + col.name + "'");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (iequals(def.columns[j].name, col.name)) {
                throw Error(ErrorCode::InvalidSchema, "duplicate column " + col.name);
            }
        }
        if (col.primary_key) {
            ++pk_count;
            if (col.kind != ColumnKind::Integer || col.nullable) {
                throw Error(ErrorCode::InvalidSchema,
                            "primary key " + col.name + " must be a non-null integer");
            }
        }
        if (col.default_value && !is_null(*col.default_value) &&
            kind_of(*col.default_value) != col.kind) {
            throw Error(ErrorCode::InvalidSchema, "default of " + col.name + " has wrong kind");
        }
        if (col.default_now && col.kind != ColumnKind::Timestamp) {
            throw Error(ErrorCode::InvalidSchema, col.name + ": default_now needs a timestamp");
        }
        if (!col.references.empty() && col.kind != ColumnKind::Integer) {
            throw Error(ErrorCode::InvalidSchema, col.name + ": references need an integer");
        }
    }
    if (pk_count != 1) {
        throw Error(ErrorCode::InvalidSchema,
                    "table " + def.name + " needs exactly one primary key");
    }
}

std::vector<TableDef> default_schema() {
    using K = ColumnKind;
    TableDef categories{
        std::string(tables::kCategories),
        {
            {.name = "Category_Id", .kind = K::Integer, .nullable = false, .primary_key = true},
            {.name = "Category_Name", .kind = K::Text, .nullable = false, .unique = true},
        }};
    TableDef products{
        std::string(tables::kProducts),
        {
            {.name = "Product_Id", .kind = K::Integer, .nullable = false, .primary_key = true},
            {.name = "Category_Id", .kind = K::Integer, .nullable = true,
             .references = std::string(tables::kCategories)},
            {.name = "Product_Name", .kind = K::Text, .nullable = false},
            {.name = "Price", .kind = K::Decimal, .nullable = false, .non_negative = true},
            {.name = "Is_Favorite", .kind = K::Boolean, .nullable = false,
             .default_value = Value{false}},
        }};
    TableDef list{
        std::string(tables::kList),
        {
            {.name = "Item_Id", .kind = K::Integer, .nullable = false, .primary_key = true},
            {.name = "Product_Id", .kind = K::Integer, .nullable = false,
             .references = std::string(tables::kProducts)},
            {.name = "Bought", .kind = K::Boolean, .nullable = false,
             .default_value = Value{false}},
            {.name = "Added_At", .kind = K::Timestamp, .nullable = false, .default_now = true},
        }};
    return {std::move(categories), std::move(products), std::move(list)};
}

std::uint64_t schema_fingerprint(const std::vector<TableDef>& defs) {
    std::string canon;
    for (const auto& t : defs) {
        canon += t.name;
        canon += '(';
        for (const auto& c : t.columns) {
            canon += c.name;
            canon += ':';
            canon += to_string(c.kind);
            canon += c.nullable ? "" : "!";
            canon += c.primary_key ? "pk" : "";
            canon += c.unique ? "u" : "";
            canon += c.non_negative ? ">=0" : "";
            canon += c.default_now ? "=now" : "";
            if (c.default_value) canon += "=" + to_display(*c.default_value);
            canon += c.references.empty() ? "" : "->" + c.references;
            canon += ',';
        }
        canon += ')';
    }
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace shoplist::store
