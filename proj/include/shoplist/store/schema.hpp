// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/store/value.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shoplist::store {

struct ColumnDef {
    std::string name;
    ColumnKind kind = ColumnKind::Integer;
    bool nullable = true;
    bool primary_key = false;
    bool unique = false;
    /// Rejects negative numeric values (CheckViolation).
    bool non_negative = false;
    /// Filled in when an insert leaves the column null.
    std::optional<Value> default_value;
    /// Default is the store clock's current time (timestamp columns).
    bool default_now = false;
    /// Name of the table whose primary key this column references; empty for none.
    std::string references;

    friend bool operator==(const ColumnDef&, const ColumnDef&) = default;
};

struct TableDef {
    std::string name;
    std::vector<ColumnDef> columns;

    /// Case-insensitive column lookup.
    std::optional<std::size_t> find_column(std::string_view column) const;
    std::size_t pk_index() const;
    const ColumnDef& pk_column() const { return columns[pk_index()]; }

    friend bool operator==(const TableDef&, const TableDef&) = default;
};

/// Throws InvalidSchema unless the definition has exactly one integer
/// primary key, unique (case-insensitive) identifier-shaped column names, and
/// defaults matching their column kinds.
void validate(const TableDef& def);

bool iequals(std::string_view a, std::string_view b);
bool is_identifier(std::string_view s);

namespace tables {
inline constexpr std::string_view kCategories = "Categories";
inline constexpr std::string_view kProducts = "Products";
inline constexpr std::string_view kList = "List";
} // namespace tables

/// Categories, Products and List with their referential links.
std::vector<TableDef> default_schema();

/// FNV-1a over a canonical rendering of the definitions, order-sensitive.
std::uint64_t schema_fingerprint(const std::vector<TableDef>& defs);

} // namespace shoplist::store
