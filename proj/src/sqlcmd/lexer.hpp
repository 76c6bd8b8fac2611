// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace shoplist::sqlcmd::detail {

enum class TokenKind { Word, String, Number, Symbol, End };

struct Token {
    TokenKind kind = TokenKind::End;
    /// Word/number text as written, unescaped string contents, or the symbol.
    std::string text;
    std::size_t position = 0;
};

/// Throws SyntaxError on an unterminated string or a stray character.
std::vector<Token> tokenize(std::string_view sql);

} // namespace shoplist::sqlcmd::detail
