// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "shoplist/store/store.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace shoplist::sqlcmd {

using store::Assignment;
using store::Predicate;
using store::Value;

struct InsertCommand {
    std::string table;
    std::vector<std::string> columns;
    std::vector<Value> values;

    friend bool operator==(const InsertCommand&, const InsertCommand&) = default;
};

struct SelectCommand {
    /// Empty selects every column (`*`).
    std::vector<std::string> columns;
    std::string table;
    std::optional<Predicate> where;

    bool is_star() const { return columns.empty(); }
    friend bool operator==(const SelectCommand&, const SelectCommand&) = default;
};

struct UpdateCommand {
    std::string table;
    std::vector<Assignment> assignments;
    std::optional<Predicate> where;

    friend bool operator==(const UpdateCommand&, const UpdateCommand&) = default;
};

struct DeleteCommand {
    std::string table;
    std::optional<Predicate> where;

    friend bool operator==(const DeleteCommand&, const DeleteCommand&) = default;
};

using Command = std::variant<InsertCommand, SelectCommand, UpdateCommand, DeleteCommand>;

/// Parses one statement of the supported subset:
///
///   INSERT INTO t (c, ...) VALUES (lit, ...)
///   SELECT * | c, ... FROM t [WHERE c op lit]
///   UPDATE t SET c = lit, ... [WHERE c op lit]
///   DELETE FROM t [WHERE c op lit]
///
/// Keywords are case-insensitive, a trailing ';' is accepted. Literals are
/// 'text' (with '' escaping), integers, decimals with up to four fractional
/// digits, TRUE, FALSE and NULL.
///
/// Throws SyntaxError (with Error::position) or UnsupportedStatement.
Command parse(std::string_view sql);

/// Canonical text: uppercase keywords, single spaces, parenthesized column
/// lists. parse(render(c)) == c for every command parse() can produce.
std::string render(const Command& cmd);

std::string render_literal(const Value& v);

/// Table named by any command variant.
const std::string& target_table(const Command& cmd);

} // namespace shoplist::sqlcmd
