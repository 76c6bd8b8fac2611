// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "lexer.hpp"
#include "shoplist/error.hpp"
#include "shoplist/sqlcmd/command.hpp"

#include <array>
#include <charconv>

namespace shoplist::sqlcmd {
namespace {

using detail::Token;
using detail::TokenKind;
using store::CompareOp;
using store::iequals;

constexpr std::array<std::string_view, 13> kReserved{
    "SELECT", "INSERT", "INTO", "VALUES", "UPDATE", "SET", "DELETE",
    "FROM",   "WHERE",  "TRUE", "FALSE",  "NULL",   "DROP"};

bool is_reserved(std::string_view word) {
    for (auto r : kReserved) {
        if (iequals(r, word)) return true;
    }
    return false;
}

class Parser {
public:
    explicit Parser(std::string_view sql) : tokens_(detail::tokenize(sql)) {}

    Command statement() {
        const Token& first = peek();
        if (first.kind != TokenKind::Word) fail(first, "a statement keyword");
        Command cmd;
        if (iequals(first.text, "INSERT")) {
            cmd = insert();
        } else if (iequals(first.text, "SELECT")) {
            cmd = select();
        } else if (iequals(first.text, "UPDATE")) {
            cmd = update();
        } else if (iequals(first.text, "DELETE")) {
            cmd = remove();
        } else {
            throw Error(ErrorCode::UnsupportedStatement,
                        "'" + first.text + "' is outside the INSERT/SELECT/UPDATE/DELETE subset");
        }
        accept_symbol(";");
        if (peek().kind != TokenKind::End) fail(peek(), "end of statement");
        return cmd;
    }

private:
    InsertCommand insert() {
        keyword("INSERT");
        keyword("INTO");
        InsertCommand cmd;
        cmd.table = identifier();
        symbol("(");
        do {
            cmd.columns.push_back(identifier());
        } while (accept_symbol(","));
        symbol(")");
        keyword("VALUES");
        const Token& open = peek();
        symbol("(");
        do {
            cmd.values.push_back(literal());
        } while (accept_symbol(","));
        symbol(")");
        if (cmd.values.size() != cmd.columns.size()) {
            fail(open, std::to_string(cmd.values.size()) + " values for " +
                           std::to_string(cmd.columns.size()) + " columns");
        }
        return cmd;
    }

    SelectCommand select() {
        keyword("SELECT");
        SelectCommand cmd;
        if (!accept_symbol("*")) {
            do {
                cmd.columns.push_back(identifier());
            } while (accept_symbol(","));
        }
        keyword("FROM");
        cmd.table = identifier();
        cmd.where = where();
        return cmd;
    }

    UpdateCommand update() {
        keyword("UPDATE");
        UpdateCommand cmd;
        cmd.table = identifier();
        keyword("SET");
        do {
            Assignment a;
            a.column = identifier();
            symbol("=");
            a.value = literal();
            cmd.assignments.push_back(std::move(a));
        } while (accept_symbol(","));
        cmd.where = where();
        return cmd;
    }

    DeleteCommand remove() {
        keyword("DELETE");
        keyword("FROM");
        DeleteCommand cmd;
        cmd.table = identifier();
        cmd.where = where();
        return cmd;
    }

    std::optional<Predicate> where() {
        if (!accept_keyword("WHERE")) return std::nullopt;
        Predicate p;
        p.column = identifier();
        const Token& op = next();
        if (op.kind != TokenKind::Symbol) fail(op, "a comparison operator");
        if (op.text == "=") p.op = CompareOp::Eq;
        else if (op.text == "<>") p.op = CompareOp::Ne;
        else if (op.text == "<") p.op = CompareOp::Lt;
        else if (op.text == "<=") p.op = CompareOp::Le;
        else if (op.text == ">") p.op = CompareOp::Gt;
        else if (op.text == ">=") p.op = CompareOp::Ge;
        else fail(op, "a comparison operator");
        p.literal = literal();
        return p;
    }

    Value literal() {
        const Token& t = next();
        switch (t.kind) {
        case TokenKind::String:
            return t.text;
        case TokenKind::Number: {
            if (t.text.find('.') != std::string::npos) {
                auto d = store::Decimal::parse(t.text);
                if (!d) fail(t, "a decimal with at most 4 fractional digits");
                return *d;
            }
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc{} || p != t.text.data() + t.text.size()) {
                fail(t, "an integer in 64-bit range");
            }
            return v;
        }
        case TokenKind::Word:
            if (iequals(t.text, "TRUE")) return true;
            if (iequals(t.text, "FALSE")) return false;
            if (iequals(t.text, "NULL")) return store::Null{};
            break;
        default:
            break;
        }
        fail(t, "a literal");
    }

    std::string identifier() {
        const Token& t = next();
        if (t.kind != TokenKind::Word || is_reserved(t.text)) fail(t, "an identifier");
        return t.text;
    }

    void keyword(std::string_view kw) {
        const Token& t = next();
        if (t.kind != TokenKind::Word || !iequals(t.text, kw)) fail(t, std::string(kw));
    }

    bool accept_keyword(std::string_view kw) {
        if (peek().kind == TokenKind::Word && iequals(peek().text, kw)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void symbol(std::string_view sym) {
        const Token& t = next();
        if (t.kind != TokenKind::Symbol || t.text != sym) fail(t, "'" + std::string(sym) + "'");
    }

    bool accept_symbol(std::string_view sym) {
        if (peek().kind == TokenKind::Symbol && peek().text == sym) {
            ++pos_;
            return true;
        }
        return false;
    }

    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (t.kind != TokenKind::End) ++pos_;
        return t;
    }

    [[noreturn]] static void fail(const Token& at, const std::string& expected) {
        std::string found = at.kind == TokenKind::End ? "end of input" : "'" + at.text + "'";
        Error e(ErrorCode::SyntaxError, "expected " + expected + " but found " + found +
                                            " at position " + std::to_string(at.position));
        e.position = at.position;
        throw e;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace

Command parse(std::string_view sql) {
    Parser parser(sql);
    return parser.statement();
}

const std::string& target_table(const Command& cmd) {
    return std::visit([](const auto& c) -> const std::string& { return c.table; }, cmd);
}

} // namespace shoplist::sqlcmd
