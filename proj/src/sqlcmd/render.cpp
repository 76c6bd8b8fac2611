// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/sqlcmd/command.hpp"

namespace shoplist::sqlcmd {
namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

void render_where(std::string& out, const std::optional<Predicate>& where) {
    if (!where) return;
    out += " WHERE ";
    out += where->column;
    out += ' ';
    out += store::to_string(where->op);
    out += ' ';
    out += render_literal(where->literal);
}

} // namespace

std::string render_literal(const Value& v) {
    struct Visitor {
        std::string operator()(store::Null) const { return "NULL"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(store::Decimal d) const { return d.to_string(); }
        std::string operator()(const std::string& s) const {
            std::string out = "'";
            for (char c : s) {
                if (c == '\'') out += '\'';
                out += c;
            }
            out += '\'';
            return out;
        }
        std::string operator()(bool b) const { return b ? "TRUE" : "FALSE"; }
        // Timestamps have no literal form; they travel as epoch milliseconds.
        std::string operator()(store::Timestamp t) const { return std::to_string(t.ms); }
    };
    return std::visit(Visitor{}, v);
}

std::string render(const Command& cmd) {
    struct Visitor {
        std::string operator()(const InsertCommand& c) const {
            std::vector<std::string> values;
            for (const auto& v : c.values) values.push_back(render_literal(v));
            return "INSERT INTO " + c.table + " (" + join(c.columns) + ") VALUES (" + join(values) + ")";
        }
        std::string operator()(const SelectCommand& c) const {
            std::string out = "SELECT " + (c.is_star() ? std::string("*") : join(c.columns)) +
                              " FROM " + c.table;
            render_where(out, c.where);
            return out;
        }
        std::string operator()(const UpdateCommand& c) const {
            std::string out = "UPDATE " + c.table + " SET ";
            for (std::size_t i = 0; i < c.assignments.size(); ++i) {
                if (i) out += ", ";
                out += c.assignments[i].column + " = " + render_literal(c.assignments[i].value);
            }
            render_where(out, c.where);
            return out;
        }
        std::string operator()(const DeleteCommand& c) const {
            std::string out = "DELETE FROM " + c.table;
            render_where(out, c.where);
            return out;
        }
    };
    return std::visit(Visitor{}, cmd);
}

} // namespace shoplist::sqlcmd
