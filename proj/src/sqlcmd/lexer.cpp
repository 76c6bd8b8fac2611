// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "lexer.hpp"

#include "shoplist/error.hpp"

#include <cctype>

namespace shoplist::sqlcmd::detail {
namespace {

[[noreturn]] void fail(std::size_t pos, const std::string& what) {
    Error e(ErrorCode::SyntaxError, what + " at position " + std::to_string(pos));
    e.position = pos;
    throw e;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

} // namespace

std::vector<Token> tokenize(std::string_view sql) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < sql.size()) {
        char c = sql[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < sql.size() &&
                   (std::isalnum(static_cast<unsigned char>(sql[i])) || sql[i] == '_')) {
                ++i;
            }
            out.push_back({TokenKind::Word, std::string(sql.substr(start, i - start)), start});
            continue;
        }
        if (is_digit(c) || (c == '-' && i + 1 < sql.size() && is_digit(sql[i + 1]))) {
            ++i;
            while (i < sql.size() && is_digit(sql[i])) ++i;
            if (i < sql.size() && sql[i] == '.') {
                ++i;
                if (i >= sql.size() || !is_digit(sql[i])) fail(i, "expected digit after '.'");
                while (i < sql.size() && is_digit(sql[i])) ++i;
            }
            out.push_back({TokenKind::Number, std::string(sql.substr(start, i - start)), start});
            continue;
        }
        if (c == '\'') {
            std::string text;
            ++i;
            for (;;) {
                if (i >= sql.size()) fail(start, "unterminated string literal");
                if (sql[i] == '\'') {
                    if (i + 1 < sql.size() && sql[i + 1] == '\'') {
                        text.push_back('\'');
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                text.push_back(sql[i++]);
            }
            out.push_back({TokenKind::String, std::move(text), start});
            continue;
        }
        if (c == '<' || c == '>') {
            std::string sym(1, c);
            if (i + 1 < sql.size() && (sql[i + 1] == '=' || (c == '<' && sql[i + 1] == '>'))) {
                sym.push_back(sql[i + 1]);
            }
            i += sym.size();
            out.push_back({TokenKind::Symbol, std::move(sym), start});
            continue;
        }
        if (c == '(' || c == ')' || c == ',' || c == '*' || c == '=' || c == ';') {
            ++i;
            out.push_back({TokenKind::Symbol, std::string(1, c), start});
            continue;
        }
        fail(start, std::string("unexpected character '") + c + "'");
    }
    out.push_back({TokenKind::End, "", sql.size()});
    return out;
}

} // namespace shoplist::sqlcmd::detail
