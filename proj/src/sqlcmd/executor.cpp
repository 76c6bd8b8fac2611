// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/sqlcmd/executor.hpp"

#include "shoplist/error.hpp"

namespace shoplist::sqlcmd {
namespace {

using store::Row;
using store::TableDef;

std::size_t column_index(const TableDef& def, const std::string& column) {
    auto idx = def.find_column(column);
    if (!idx) throw Error(ErrorCode::UnknownColumn, def.name + "." + column);
    return *idx;
}

std::vector<std::int64_t> matching_keys(const store::Store& store, const std::string& table,
                                        const std::optional<Predicate>& where) {
    const auto& def = store.table_def(table);
    auto pk = def.pk_index();
    std::vector<std::int64_t> keys;
    for (const auto& row : store.scan(table, where)) keys.push_back(std::get<std::int64_t>(row.values[pk]));
    return keys;
}

std::size_t run(store::Store& store, const InsertCommand& cmd) {
    const auto& def = store.table_def(cmd.table);
    Row row{std::vector<Value>(def.columns.size(), store::Null{})};
    std::vector<bool> seen(def.columns.size(), false);
    for (std::size_t i = 0; i < cmd.columns.size(); ++i) {
        auto idx = column_index(def, cmd.columns[i]);
        if (seen[idx]) {
            throw Error(ErrorCode::SyntaxError, "column " + def.columns[idx].name + " listed twice");
        }
        seen[idx] = true;
        row.values[idx] = cmd.values[i];
    }
    store.insert_row(def.name, std::move(row));
    return 1;
}

std::size_t run(store::Store& store, const UpdateCommand& cmd) {
    const auto& def = store.table_def(cmd.table);
    for (const auto& a : cmd.assignments) column_index(def, a.column);
    std::size_t affected = 0;
    for (auto pk : matching_keys(store, def.name, cmd.where)) {
        if (store.update_row(def.name, pk, cmd.assignments)) ++affected;
    }
    return affected;
}

std::size_t run(store::Store& store, const DeleteCommand& cmd) {
    const auto& def = store.table_def(cmd.table);
    std::size_t affected = 0;
    for (auto pk : matching_keys(store, def.name, cmd.where)) {
        if (store.delete_row(def.name, pk)) ++affected;
    }
    return affected;
}

std::size_t run(store::Store&, const SelectCommand&) {
    throw Error(ErrorCode::NotAQuery, "SELECT returns rows; use fill");
}

} // namespace

void ResultSet::add(store::Row row) {
    rows.push_back(std::move(row));
    row_states.push_back(RowState::Added);
}

void ResultSet::modify(std::size_t index, store::Row row) {
    rows.at(index) = std::move(row);
    if (row_states[index] != RowState::Added) row_states[index] = RowState::Modified;
}

void ResultSet::remove(std::size_t index) { row_states.at(index) = RowState::Deleted; }

std::size_t execute_non_query(store::Store& store, const Command& cmd) {
    return std::visit([&](const auto& c) { return run(store, c); }, cmd);
}

ResultSet fill(const store::Store& store, const SelectCommand& cmd) {
    const auto& def = store.table_def(cmd.table);
    std::vector<std::size_t> projection;
    ResultSet rs;
    rs.source_table = def.name;
    if (cmd.is_star()) {
        for (std::size_t i = 0; i < def.columns.size(); ++i) projection.push_back(i);
    } else {
        for (const auto& c : cmd.columns) projection.push_back(column_index(def, c));
    }
    for (auto idx : projection) rs.columns.push_back(def.columns[idx].name);
    for (auto& row : store.scan(def.name, cmd.where)) {
        Row projected;
        projected.values.reserve(projection.size());
        for (auto idx : projection) projected.values.push_back(std::move(row.values[idx]));
        rs.rows.push_back(std::move(projected));
    }
    rs.row_states.assign(rs.rows.size(), RowState::Unchanged);
    return rs;
}

std::size_t apply_changes(store::Store& store, const ResultSet& rs) {
    if (rs.rows.size() != rs.row_states.size()) {
        throw Error(ErrorCode::TypeMismatch, "row_states does not match rows");
    }
    const auto& def = store.table_def(rs.source_table);
    std::vector<std::size_t> mapping;
    for (const auto& c : rs.columns) mapping.push_back(column_index(def, c));
    std::optional<std::size_t> pk_pos;
    for (std::size_t i = 0; i < mapping.size(); ++i) {
        if (mapping[i] == def.pk_index()) pk_pos = i;
    }
    auto key_of = [&](std::size_t row_index) {
        if (!pk_pos) {
            throw Error(ErrorCode::MissingPrimaryKey, "result set lacks " + def.pk_column().name);
        }
        auto key = store::coerce(rs.rows[row_index].values.at(*pk_pos), store::ColumnKind::Integer);
        if (!key || store::is_null(*key)) throw Error(ErrorCode::TypeMismatch, "bad primary key");
        return std::get<std::int64_t>(*key);
    };

    std::size_t applied = 0;
    auto pass = [&](RowState state, auto&& apply_one) {
        for (std::size_t i = 0; i < rs.rows.size(); ++i) {
            if (rs.row_states[i] != state) continue;
            try {
                if (apply_one(i)) ++applied;
            } catch (Error& e) {
                e.row_index = i;
                throw;
            }
        }
    };

    pass(RowState::Deleted, [&](std::size_t i) { return store.delete_row(def.name, key_of(i)); });
    pass(RowState::Modified, [&](std::size_t i) {
        std::vector<Assignment> assignments;
        for (std::size_t c = 0; c < mapping.size(); ++c) {
            if (mapping[c] == def.pk_index()) continue;
            assignments.push_back({def.columns[mapping[c]].name, rs.rows[i].values.at(c)});
        }
        return store.update_row(def.name, key_of(i), assignments);
    });
    pass(RowState::Added, [&](std::size_t i) {
        Row row{std::vector<Value>(def.columns.size(), store::Null{})};
        for (std::size_t c = 0; c < mapping.size(); ++c) row.values[mapping[c]] = rs.rows[i].values.at(c);
        store.insert_row(def.name, std::move(row));
        return true;
    });
    return applied;
}

} // namespace shoplist::sqlcmd
