// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/sqlcmd/command.hpp"
#include "shoplist/store/store.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace shoplist::sqlcmd {

enum class RowState { Unchanged, Added, Modified, Deleted };

/// Rows read from one table plus per-row edit state, in the shape of a
/// disconnected data set: fill() produces it, callers edit rows and states,
/// apply_changes() writes the edits back.
struct ResultSet {
    std::vector<std::string> columns;
    std::vector<store::Row> rows;
    std::string source_table;
    std::vector<RowState> row_states;

    /// Appends a row marked Added.
    void add(store::Row row);
    /// Replaces a row and marks it Modified (Added rows stay Added).
    void modify(std::size_t index, store::Row row);
    void remove(std::size_t index);
};

/// Runs an INSERT, UPDATE or DELETE and returns the number of rows affected.
/// Store errors pass through; a SELECT throws NotAQuery. Multi-row updates and
/// deletes stop at the first failing row and keep earlier effects.
std::size_t execute_non_query(store::Store& store, const Command& cmd);

/// Every row state is Unchanged; columns follow the select list with
/// canonical names.
ResultSet fill(const store::Store& store, const SelectCommand& cmd);

/// Applies deleted, then modified, then added rows. Modified and deleted rows
/// are addressed by the primary-key column, which must be among `columns`.
/// Stops at the first error, leaving earlier applications in place; the
/// error carries the failing row index in Error::row_index.
std::size_t apply_changes(store::Store& store, const ResultSet& rs);

} // namespace shoplist::sqlcmd
