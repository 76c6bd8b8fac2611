// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/store/value.hpp"

#include <charconv>
#include <limits>

namespace shoplist::store {

std::string_view to_string(ColumnKind kind) {
    switch (kind) {
    case ColumnKind::Integer: return "integer";
    case ColumnKind::Decimal: return "decimal";
    case ColumnKind::Text: return "text";
    case ColumnKind::Boolean: return "boolean";
    case ColumnKind::Timestamp: return "timestamp";
    }
    return "unknown";
}

std::optional<ColumnKind> column_kind_from_string(std::string_view name) {
    for (auto k : {ColumnKind::Integer, ColumnKind::Decimal, ColumnKind::Text,
                   ColumnKind::Boolean, ColumnKind::Timestamp}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty()) return std::nullopt;
    if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
    if (frac.size() > static_cast<std::size_t>(kFractionDigits)) return std::nullopt;
    for (char c : whole) if (c < '0' || c > '9') return std::nullopt;
    for (char c : frac) if (c < '0' || c > '9') return std::nullopt;

    std::int64_t units = 0;
    auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), units);
    if (ec != std::errc{} || p != whole.data() + whole.size()) return std::nullopt;
    if (units > std::numeric_limits<std::int64_t>::max() / kScale - 1) return std::nullopt;

    std::int64_t fraction = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(kFractionDigits); ++i) {
        fraction = fraction * 10 + (i < frac.size() ? frac[i] - '0' : 0);
    }
    std::int64_t scaled = units * kScale + fraction;
    return Decimal(negative ? -scaled : scaled);
}

std::string Decimal::to_string() const {
    std::uint64_t magnitude = scaled_ < 0 ? 0 - static_cast<std::uint64_t>(scaled_)
                                          : static_cast<std::uint64_t>(scaled_);
    std::string out = scaled_ < 0 ? "-" : "";
    out += std::to_string(magnitude / kScale);
    std::string frac = std::to_string(magnitude % kScale);
    frac.insert(0, kFractionDigits - frac.size(), '0');
    while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
    out += '.';
    out += frac;
    return out;
}

ColumnKind kind_of(const Value& v) {
    struct Visitor {
        ColumnKind operator()(Null) const { return ColumnKind::Integer; }
        ColumnKind operator()(std::int64_t) const { return ColumnKind::Integer; }
        ColumnKind operator()(Decimal) const { return ColumnKind::Decimal; }
        ColumnKind operator()(const std::string&) const { return ColumnKind::Text; }
        ColumnKind operator()(bool) const { return ColumnKind::Boolean; }
        ColumnKind operator()(Timestamp) const { return ColumnKind::Timestamp; }
    };
    return std::visit(Visitor{}, v);
}

std::optional<Value> coerce(const Value& v, ColumnKind kind) {
    if (is_null(v)) return v;
    ColumnKind have = kind_of(v);
    if (have == kind) return v;
    if (have == ColumnKind::Integer) {
        auto i = std::get<std::int64_t>(v);
        switch (kind) {
        case ColumnKind::Decimal:
            if (i > std::numeric_limits<std::int64_t>::max() / Decimal::kScale ||
                i < std::numeric_limits<std::int64_t>::min() / Decimal::kScale) {
                return std::nullopt;
            }
            return Decimal::from_units(i);
        case ColumnKind::Boolean:
            if (i == 0 || i == 1) return i == 1;
            return std::nullopt;
        case ColumnKind::Timestamp:
            return Timestamp{i};
        default:
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::string to_display(const Value& v) {
    struct Visitor {
        std::string operator()(Null) const { return "NULL"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(Decimal d) const { return d.to_string(); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(Timestamp t) const { return std::to_string(t.ms); }
    };
    return std::visit(Visitor{}, v);
}

std::string_view to_string(CompareOp op) {
    switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "<>";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "?";
}

bool compare(const Value& lhs, CompareOp op, const Value& rhs) {
    if (is_null(lhs) || is_null(rhs)) return false;
    if (lhs.index() != rhs.index()) return false;
    std::partial_ordering order = lhs <=> rhs;
    switch (op) {
    case CompareOp::Eq: return order == 0;
    case CompareOp::Ne: return order != 0;
    case CompareOp::Lt: return order < 0;
    case CompareOp::Le: return order <= 0;
    case CompareOp::Gt: return order > 0;
    case CompareOp::Ge: return order >= 0;
    }
    return false;
}

} // namespace shoplist::store
