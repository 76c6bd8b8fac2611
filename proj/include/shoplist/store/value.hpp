// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace shoplist::store {

enum class ColumnKind : std::uint8_t {
    Integer = 1,
    Decimal = 2,
    Text = 3,
    Boolean = 4,
    Timestamp = 5,
};

std::string_view to_string(ColumnKind kind);
std::optional<ColumnKind> column_kind_from_string(std::string_view name);

/// Fixed-point money value with four fractional digits, stored as a scaled integer.
class Decimal {
public:
    static constexpr std::int64_t kScale = 10000;
    static constexpr int kFractionDigits = 4;

    constexpr Decimal() = default;
    static constexpr Decimal from_scaled(std::int64_t scaled) { return Decimal(scaled); }
    static constexpr Decimal from_units(std::int64_t units) { return Decimal(units * kScale); }

    /// Parses "-12.5", "3", "0.0001". Nullopt on malformed text or more than four
    /// fractional digits.
    static std::optional<Decimal> parse(std::string_view text);

    constexpr std::int64_t scaled() const { return scaled_; }

    /// Shortest text with at least one fractional digit: "2.5", "3.0".
    std::string to_string() const;

    friend constexpr auto operator<=>(Decimal, Decimal) = default;

private:
    constexpr explicit Decimal(std::int64_t scaled) : scaled_(scaled) {}
    std::int64_t scaled_ = 0;
};

/// Whole milliseconds since the Unix epoch.
struct Timestamp {
    std::int64_t ms = 0;
    friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
};

struct Null {
    friend constexpr auto operator<=>(Null, Null) = default;
};

/// A typed cell. Integer literals that land in decimal, boolean or timestamp
/// columns are converted by coerce().
using Value = std::variant<Null, std::int64_t, Decimal, std::string, bool, Timestamp>;

inline bool is_null(const Value& v) { return std::holds_alternative<Null>(v); }

/// Kind of a non-null value.
ColumnKind kind_of(const Value& v);

/// Converts a value to the given column kind, or nullopt when no lossless
/// conversion exists. Null passes through unchanged.
std::optional<Value> coerce(const Value& v, ColumnKind kind);

/// Human/debug rendering. Text is unquoted; null renders as "NULL".
std::string to_display(const Value& v);

struct Row {
    std::vector<Value> values;
    friend bool operator==(const Row&, const Row&) = default;
};

enum class CompareOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op);

/// SQL-style comparison of two values of the same kind. Comparisons with
/// null are false.
bool compare(const Value& lhs, CompareOp op, const Value& rhs);

} // namespace shoplist::store
